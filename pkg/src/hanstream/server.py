"""WebSocket session endpoint and static hosting for the browser console.

One worker per live session drains an inbound inbox strictly in order, so
frame processing is serial per session while distinct sessions stay
independent. If more than QUEUE_FRAME_LIMIT landmark frames are pending, the
oldest one is dropped (latest pose wins); control messages are never dropped.
Error replies go to the sender only; everything else is broadcast in seq
order.
"""

from __future__ import annotations

import asyncio
import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles

from .session import ErrorMsg, OutboundMessage, Session, serialize_outbound
from .story import StoryScript

QUEUE_FRAME_LIMIT = 8

_PLACEHOLDER = """<!doctype html>
<html><head><title>hanstream</title></head>
<body><h1>hanstream session server</h1>
<p>No web console bundle found. Connect a client to <code>/ws</code>.</p>
</body></html>"""


@dataclass
class _Client:
    ws: WebSocket
    role: str


def _is_frame(obj: object) -> bool:
    return isinstance(obj, dict) and obj.get("type") == "frame"


@dataclass
class LiveSession:
    session: Session
    presenter: _Client | None = None
    viewers: list[_Client] = field(default_factory=list)
    inbox: deque = field(default_factory=deque)
    wake: asyncio.Event = field(default_factory=asyncio.Event)
    worker: asyncio.Task | None = None

    def clients(self) -> list[_Client]:
        out = list(self.viewers)
        if self.presenter is not None:
            out.append(self.presenter)
        return out

    def enqueue(self, sender: _Client, obj: dict) -> None:
        """Append a message; over the frame limit, drop the oldest pending frame."""
        if _is_frame(obj):
            pending = sum(1 for _, o in self.inbox if _is_frame(o))
            if pending >= QUEUE_FRAME_LIMIT:
                for i, (_, o) in enumerate(self.inbox):
                    if _is_frame(o):
                        del self.inbox[i]
                        self.session.dropped_frames += 1
                        break
        self.inbox.append((sender, obj))
        self.wake.set()


async def _send(client: _Client, msg: OutboundMessage) -> None:
    try:
        await client.ws.send_text(serialize_outbound(msg))
    except Exception:
        pass  # peer went away mid-send; the receive loop cleans up


async def _worker(live: LiveSession) -> None:
    while True:
        while not live.inbox:
            live.wake.clear()
            await live.wake.wait()
        sender, obj = live.inbox.popleft()
        try:
            outs = live.session.handle_message(obj, role=sender.role)
        except Exception as exc:  # never kill the session on one bad message
            outs = [ErrorMsg(code="internal_error", detail=str(exc))]
        for msg in outs:
            if isinstance(msg, ErrorMsg):
                await _send(sender, msg)
            else:
                for client in live.clients():
                    await _send(client, msg)


class SessionHub:
    def __init__(self, script: StoryScript, base_dir: Path, record_path: Path | None = None):
        self.script = script
        self.base_dir = base_dir
        self.record_path = record_path
        self.live: dict[str, LiveSession] = {}

    def get(self, name: str) -> LiveSession:
        live = self.live.get(name)
        if live is None:
            recorder = None
            if self.record_path is not None:
                p = self.record_path
                target = p if name == "main" else p.with_name(f"{p.stem}.{name}{p.suffix}")
                recorder = open(target, "w", encoding="utf-8")
            live = LiveSession(
                session=Session(self.script, base_dir=self.base_dir, recorder=recorder)
            )
            live.worker = asyncio.get_running_loop().create_task(_worker(live))
            self.live[name] = live
        return live


def create_app(
    script: StoryScript,
    base_dir: str | Path = ".",
    record_path: str | Path | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="hanstream")
    hub = SessionHub(script, Path(base_dir), Path(record_path) if record_path else None)
    app.state.hub = hub

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        # a session is established via hello
        try:
            text = await ws.receive_text()
        except WebSocketDisconnect:
            return

        async def reject(detail: str, code: str = "bad_message") -> None:
            await ws.send_text(serialize_outbound(ErrorMsg(code=code, detail=detail)))
            await ws.close()

        try:
            first = json.loads(text)
        except json.JSONDecodeError:
            await reject("invalid JSON")
            return
        if not isinstance(first, dict) or first.get("type") != "hello":
            await reject("first message must be hello")
            return
        role = first.get("role")
        if role not in ("presenter", "viewer"):
            await reject(f"bad role {role!r}")
            return
        live = hub.get(first.get("session") or "main")
        client = _Client(ws=ws, role=role)
        if role == "presenter":
            if live.presenter is not None:
                await reject("session already has a presenter", code="presenter_taken")
                return
            live.presenter = client
        else:
            live.viewers.append(client)
        live.enqueue(client, first)  # worker broadcasts story info + fresh scene state
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    obj = json.loads(raw)
                except json.JSONDecodeError:
                    await _send(client, ErrorMsg(code="bad_message", detail="invalid JSON"))
                    continue
                live.enqueue(client, obj)
        except WebSocketDisconnect:
            pass
        finally:
            if live.presenter is client:
                live.presenter = None
            elif client in live.viewers:
                live.viewers.remove(client)

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="console")
    else:

        @app.get("/")
        async def index() -> HTMLResponse:
            return HTMLResponse(_PLACEHOLDER)

    return app
