"""Control service: live hand state over WebSocket and TCP.

Both transports speak the same line-delimited JSON protocol (one message
per WebSocket text frame, one message per newline-terminated line on TCP).
Every message carries `"v": 1`; messages without it are rejected. Unknown
fields are ignored for forward compatibility. Angles on the wire are
degrees; lengths are meters.

Server -> client messages:

  state   v:1, type:"state", seq (int, increases with every change),
          t (wall-clock seconds), source ("idle"|"manual"|"teleop"|
          "playback"), thumb_mode ("L"|"M"|"R"),
          joints: {finger: {theta1_deg, theta2_deg}}, plate_deg,
          tendons: {finger: {joint1, joint2, joint3}} (extensor deltas, m),
          plate_tendons: {left, right} (m),
          motors: [11 spool rotations, rad],
          fk: {finger: [[x,y,z] x 5]} (m, world frame),
          limits: {theta1_deg: [lo,hi], theta2_deg: [lo,hi],
                   plate_deg: [lo,hi]},
          playback: {active, name}.
          Sent on connect, after each accepted command, and at the state
          tick whenever the sequence number advanced, so each client sees
          strictly increasing seq values.
  err     v:1, type:"err", error (short code: "bad_message", "bad_version",
          "bad_type", "busy", "limit", "trajectory", "bad_frame",
          "bad_value"), detail (human-readable).

Client -> server messages:

  state      Request an immediate snapshot reply.
  cmd        Manual joint targets, merged onto the current state. Either
             flat: finger, theta1_deg?, theta2_deg?; or nested:
             joints: {finger: {theta1_deg?, theta2_deg?}}; plus optional
             plate_deg. Acquires the manual writer slot.
  mode       source: "idle"|"manual"|"teleop"|"playback" switches the
             writer slot (to idle = release); thumb: "L"|"M"|"R" snaps the
             plate to that preset (manual slot required/acquired).
  play       action:"start" with csv (inline trajectory CSV text) or path
             (server-side file), optional rate_scale (default 1) and
             realtime (default true). action:"stop" halts playback.
             Acquires the playback slot; it frees itself when done.
  landmarks  t (s), conf ([0,1]), pts ([[x,y,z] x 21]): one tracked hand
             frame. Acquires the teleop slot and drives retargeting.

Writer arbitration is connection-owned: whatever slot a connection holds
is released when it disconnects. A second connection asking for any slot
while one is held gets error "busy" and the holder is unaffected.
"""

from __future__ import annotations

import asyncio
import itertools
import json
import logging
import os

import numpy as np
from websockets.asyncio.server import serve as ws_serve
from websockets.exceptions import ConnectionClosed

from .errors import (
    BusBusy,
    ConfigError,
    FrameError,
    LimitViolation,
    RangeError,
    RotograbError,
    TrajectoryError,
    UnknownFingerError,
)
from .geometry import DEG, HandGeometry, check_finger
from .session import HandSession, Snapshot, Source
from .teleop import LandmarkFrame
from .thumb import ThumbMode
from .trajectory import load_trajectory, parse_trajectory

logger = logging.getLogger("rotograb.service")

DEFAULT_HOST = "127.0.0.1"
DEFAULT_WS_PORT = 8765
DEFAULT_TCP_PORT = 8766
DEFAULT_TICK_HZ = 30.0

ENV_WS_PORT = "ROTOGRAB_WS_PORT"
ENV_TCP_PORT = "ROTOGRAB_TCP_PORT"
ENV_LOG = "ROTOGRAB_LOG"

# TCP line limit; inline trajectory CSVs are the largest expected payload.
_TCP_LIMIT = 1 << 20


def _env_port(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        logger.warning("ignoring non-integer %s=%r", name, raw)
        return fallback


def env_log_level() -> int:
    name = os.environ.get(ENV_LOG, "INFO").upper()
    return getattr(logging, name, logging.INFO)


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _err(code: str, detail: str) -> dict:
    return {"v": 1, "type": "err", "error": code, "detail": detail}


class _Client:
    """One connected peer, either transport. send_text must deliver one
    whole message; a per-client lock keeps concurrent sends ordered."""

    def __init__(self, owner: str, send_text) -> None:
        self.owner = owner
        self._send_text = send_text
        self._lock = asyncio.Lock()
        self.last_seq = -1

    async def send(self, obj: dict) -> None:
        async with self._lock:
            await self._send_text(_dumps(obj))

    async def send_snapshot(self, snap: Snapshot) -> None:
        async with self._lock:
            if snap.seq <= self.last_seq:
                return
            self.last_seq = snap.seq
            await self._send_text(_dumps(snap.to_wire()))


class ControlService:
    """Serves one HandSession over WebSocket and TCP.

    start() binds both listeners and launches the tick loop; stop() tears
    everything down. Pass port 0 to bind ephemeral ports (tests); the
    bound ports are exposed as ws_port / tcp_port after start().
    """

    def __init__(
        self,
        geometry: HandGeometry,
        host: str = DEFAULT_HOST,
        ws_port: int | None = None,
        tcp_port: int | None = None,
        tick_hz: float = DEFAULT_TICK_HZ,
        session: HandSession | None = None,
    ) -> None:
        if tick_hz <= 0:
            raise ConfigError("tick_hz must be positive")
        self.geometry = geometry
        self.host = host
        self.ws_port = ws_port if ws_port is not None else _env_port(ENV_WS_PORT, DEFAULT_WS_PORT)
        self.tcp_port = (
            tcp_port if tcp_port is not None else _env_port(ENV_TCP_PORT, DEFAULT_TCP_PORT)
        )
        self.tick_hz = tick_hz
        self.session = session if session is not None else HandSession(geometry)
        self._clients: set[_Client] = set()
        self._ids = itertools.count(1)
        self._ws_server = None
        self._tcp_server: asyncio.base_events.Server | None = None
        self._tick_task: asyncio.Task | None = None

    # -- lifecycle ---------------------------------------------------------

    async def start(self) -> None:
        self._tcp_server = await asyncio.start_server(
            self._tcp_connection, self.host, self.tcp_port, limit=_TCP_LIMIT
        )
        self.tcp_port = self._tcp_server.sockets[0].getsockname()[1]
        self._ws_server = await ws_serve(self._ws_connection, self.host, self.ws_port)
        self.ws_port = self._server_port(self._ws_server)
        self._tick_task = asyncio.create_task(self._tick_loop())
        logger.info(
            "serving ws://%s:%d and tcp %s:%d (tick %.0f Hz)",
            self.host,
            self.ws_port,
            self.host,
            self.tcp_port,
            self.tick_hz,
        )

    @staticmethod
    def _server_port(server) -> int:
        sockets = getattr(server, "sockets", None)
        if not sockets:
            sockets = server.server.sockets
        return sockets[0].getsockname()[1]

    async def stop(self) -> None:
        if self._tick_task is not None:
            self._tick_task.cancel()
            try:
                await self._tick_task
            except asyncio.CancelledError:
                pass
            self._tick_task = None
        if self._ws_server is not None:
            self._ws_server.close()
            await self._ws_server.wait_closed()
            self._ws_server = None
        if self._tcp_server is not None:
            self._tcp_server.close()
            await self._tcp_server.wait_closed()
            self._tcp_server = None
        await asyncio.to_thread(self.session.shutdown)
        self._clients.clear()

    async def _tick_loop(self) -> None:
        period = 1.0 / self.tick_hz
        while True:
            await asyncio.sleep(period)
            await self._broadcast(self.session.snapshot())

    async def _broadcast(self, snap: Snapshot) -> None:
        for client in list(self._clients):
            try:
                await client.send_snapshot(snap)
            except (ConnectionClosed, ConnectionError, RuntimeError):
                self._clients.discard(client)

    # -- connection plumbing -------------------------------------------------

    async def _register(self, client: _Client) -> None:
        self._clients.add(client)
        logger.info("%s connected", client.owner)
        try:
            await client.send_snapshot(self.session.snapshot())
        except (ConnectionClosed, ConnectionError):
            self._clients.discard(client)

    async def _unregister(self, client: _Client) -> None:
        self._clients.discard(client)
        released = await asyncio.to_thread(self.session.release, client.owner)
        if released:
            await self._broadcast(self.session.snapshot())
        logger.info("%s disconnected", client.owner)

    async def _tcp_connection(
        self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter
    ) -> None:
        owner = f"tcp-{next(self._ids)}"

        async def send_text(payload: str) -> None:
            writer.write(payload.encode("utf-8") + b"\n")
            await writer.drain()

        client = _Client(owner, send_text)
        await self._register(client)
        try:
            while True:
                try:
                    line = await reader.readline()
                except ValueError:
                    await client.send(_err("bad_message", "line too long"))
                    break
                if not line:
                    break
                text = line.decode("utf-8", errors="replace").strip()
                if text:
                    await self._handle_message(client, text)
        except (ConnectionResetError, BrokenPipeError, ConnectionClosed):
            pass
        finally:
            await self._unregister(client)
            writer.close()
            try:
                await writer.wait_closed()
            except (ConnectionResetError, BrokenPipeError):
                pass

    async def _ws_connection(self, connection) -> None:
        owner = f"ws-{next(self._ids)}"

        async def send_text(payload: str) -> None:
            await connection.send(payload)

        client = _Client(owner, send_text)
        await self._register(client)
        try:
            async for message in connection:
                if isinstance(message, bytes):
                    message = message.decode("utf-8", errors="replace")
                if message.strip():
                    await self._handle_message(client, message)
        except ConnectionClosed:
            pass
        finally:
            await self._unregister(client)

    # -- message handling ------------------------------------------------

    async def _handle_message(self, client: _Client, text: str) -> None:
        try:
            msg = json.loads(text)
        except json.JSONDecodeError as exc:
            await client.send(_err("bad_message", f"invalid JSON: {exc}"))
            return
        if not isinstance(msg, dict):
            await client.send(_err("bad_message", "message must be a JSON object"))
            return
        if msg.get("v") != 1:
            await client.send(_err("bad_version", 'messages must carry "v": 1'))
            return
        mtype = msg.get("type")
        try:
            if mtype == "state":
                await client.send(self.session.snapshot().to_wire())
            elif mtype == "cmd":
                await self._on_cmd(client, msg)
            elif mtype == "mode":
                await self._on_mode(client, msg)
            elif mtype == "play":
                await self._on_play(client, msg)
            elif mtype == "landmarks":
                await self._on_landmarks(client, msg)
            else:
                await client.send(_err("bad_type", f"unknown message type {mtype!r}"))
        except BusBusy as exc:
            await client.send(_err("busy", str(exc)))
        except LimitViolation as exc:
            await client.send(_err("limit", str(exc)))
        except TrajectoryError as exc:
            await client.send(_err("trajectory", str(exc)))
        except FrameError as exc:
            await client.send(_err("bad_frame", str(exc)))
        except (UnknownFingerError, RangeError, ConfigError, RotograbError) as exc:
            await client.send(_err("bad_value", str(exc)))
        except (TypeError, ValueError, KeyError) as exc:
            await client.send(_err("bad_message", f"{type(exc).__name__}: {exc}"))

    @staticmethod
    def _angle(msg: dict, key: str) -> float | None:
        value = msg.get(key)
        if value is None:
            return None
        return float(value) * DEG

    async def _on_cmd(self, client: _Client, msg: dict) -> None:
        joints: dict[str, tuple[float | None, float | None]] = {}
        if "finger" in msg:
            finger = str(msg["finger"])
            check_finger(finger)
            joints[finger] = (self._angle(msg, "theta1_deg"), self._angle(msg, "theta2_deg"))
        for finger, entry in (msg.get("joints") or {}).items():
            check_finger(str(finger))
            if not isinstance(entry, dict):
                raise ValueError(f"joints[{finger!r}] must be an object")
            joints[str(finger)] = (
                self._angle(entry, "theta1_deg"),
                self._angle(entry, "theta2_deg"),
            )
        plate = self._angle(msg, "plate_deg")
        if not joints and plate is None:
            raise ValueError("cmd carries no joint targets")
        self.session.acquire(Source.MANUAL, client.owner)
        snap = self.session.apply_manual(client.owner, joints=joints, plate_theta=plate)
        await self._broadcast(snap)

    async def _on_mode(self, client: _Client, msg: dict) -> None:
        handled = False
        source = msg.get("source")
        if source is not None:
            try:
                wanted = Source(str(source))
            except ValueError:
                raise ValueError(f"unknown source {source!r}") from None
            if wanted is Source.IDLE:
                # releasing a slot you do not hold is a harmless no-op
                await asyncio.to_thread(self.session.release, client.owner)
            else:
                self.session.acquire(wanted, client.owner)
            handled = True
        thumb = msg.get("thumb")
        if thumb is not None:
            try:
                mode = ThumbMode(str(thumb))
            except ValueError:
                raise ValueError(f"unknown thumb mode {thumb!r}") from None
            self.session.acquire(Source.MANUAL, client.owner)
            self.session.set_thumb_mode(client.owner, mode)
            handled = True
        if not handled:
            raise ValueError('mode carries neither "source" nor "thumb"')
        await self._broadcast(self.session.snapshot())

    async def _on_play(self, client: _Client, msg: dict) -> None:
        action = msg.get("action")
        if action == "stop":
            await asyncio.to_thread(self.session.stop_playback, client.owner)
            await self._broadcast(self.session.snapshot())
            return
        if action != "start":
            raise ValueError(f'play action must be "start" or "stop", got {action!r}')
        if "csv" in msg:
            traj = parse_trajectory(str(msg["csv"]), origin="inline csv")
        elif "path" in msg:
            traj = load_trajectory(str(msg["path"]))
        else:
            raise ValueError('play start needs "csv" or "path"')
        rate_scale = float(msg.get("rate_scale", 1.0))
        realtime = bool(msg.get("realtime", True))
        was_idle = self.session.source is Source.IDLE
        self.session.acquire(Source.PLAYBACK, client.owner)
        try:
            self.session.start_playback(
                client.owner, traj, rate_scale=rate_scale, realtime=realtime
            )
        except Exception:
            # roll back the slot we just took, but never kill a playback
            # that was already running before this request
            if was_idle:
                await asyncio.to_thread(self.session.release, client.owner)
            raise
        await self._broadcast(self.session.snapshot())

    async def _on_landmarks(self, client: _Client, msg: dict) -> None:
        frame = LandmarkFrame(
            timestamp=float(msg["t"]),
            points=np.asarray(msg["pts"], dtype=float),
            confidence=float(msg["conf"]),
        )
        self.session.acquire(Source.TELEOP, client.owner)
        result = self.session.ingest_landmarks(client.owner, frame)
        if result.accepted:
            await self._broadcast(self.session.snapshot())


async def _serve_forever(service: ControlService) -> None:
    await service.start()
    try:
        await asyncio.Event().wait()  # run until cancelled
    finally:
        await service.stop()


def serve(
    geometry: HandGeometry,
    host: str = DEFAULT_HOST,
    ws_port: int | None = None,
    tcp_port: int | None = None,
    tick_hz: float = DEFAULT_TICK_HZ,
) -> None:
    """Blocking entry point: run the service until interrupted."""
    logging.basicConfig(
        level=env_log_level(), format="%(asctime)s %(name)s %(levelname)s %(message)s"
    )
    service = ControlService(
        geometry, host=host, ws_port=ws_port, tcp_port=tcp_port, tick_hz=tick_hz
    )
    try:
        asyncio.run(_serve_forever(service))
    except KeyboardInterrupt:
        logger.info("interrupted, shutting down")
