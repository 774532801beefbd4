"""Live operator service: a paced control loop behind a local HTTP socket.

Endpoints (newline-delimited JSON everywhere):

- GET /stream    chunked NDJSON, one frame per 100 ms wall-clock cycle;
                 paused cycles re-emit the last frame with "paused": true
- POST /command  one JSON command object, applied at the next cycle boundary
- GET /snapshot  current configuration plus the last frame
- GET /          static operator console, when one is configured

Commands: {"cmd": "set_setpoint_deci", "value": 200..400},
{"cmd": "set_setpoint_code", "value": 0..4095},
{"cmd": "disturbance", "on": true|false},
{"cmd": "set_gains", "kp": .., "ki": .., "kd": ..},
{"cmd": "pause"}, {"cmd": "resume"}, {"cmd": "reset"}.

Commands are validated at parse time and queued; the control thread drains
the queue at each cycle start, so a frame reflects either all or none of a
command's effect. Subscribers get immutable frame dicts; attaching or
detaching a subscriber can never perturb the trajectory.
"""

import json
import queue
import threading
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from ._backend import backend_name
from .controller import PidGains
from .signal_chain import ADC_MAX_CODE, POT_MAX_DECI, POT_MIN_DECI, pot_code_to_setpoint
from .sim_engine import (
    ControlLoop,
    Disturbance,
    LoopConfig,
    Scenario,
    SetpointCode,
    SetpointTemp,
)
from .telemetry import record_to_obj


class CommandError(ValueError):
    """Malformed or out-of-range operator command."""


@dataclass(frozen=True)
class Command:
    kind: str
    payload: object = None


def parse_command(obj) -> Command:
    """Validate a decoded command JSON object; raises CommandError."""
    if not isinstance(obj, dict):
        raise CommandError("command must be a JSON object")
    cmd = obj.get("cmd")
    if cmd == "set_setpoint_deci":
        value = _require_int(obj, "value")
        if not POT_MIN_DECI <= value <= POT_MAX_DECI:
            raise CommandError(
                f"setpoint {value} outside [{POT_MIN_DECI}, {POT_MAX_DECI}] deci-degrees"
            )
        return Command(cmd, value)
    if cmd == "set_setpoint_code":
        value = _require_int(obj, "value")
        if not 0 <= value <= ADC_MAX_CODE:
            raise CommandError(f"code {value} outside [0, {ADC_MAX_CODE}]")
        return Command(cmd, value)
    if cmd == "disturbance":
        on = obj.get("on")
        if not isinstance(on, bool):
            raise CommandError("disturbance needs a boolean 'on'")
        return Command(cmd, on)
    if cmd == "set_gains":
        try:
            gains = PidGains(
                kp=_require_int(obj, "kp"), ki=_require_int(obj, "ki"), kd=_require_int(obj, "kd")
            )
        except ValueError as exc:
            raise CommandError(str(exc)) from None
        return Command(cmd, gains)
    if cmd in ("pause", "resume", "reset"):
        return Command(cmd)
    raise CommandError(f"unknown command {cmd!r}")


def _require_int(obj: dict, key: str) -> int:
    value = obj.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise CommandError(f"{key!r} must be an integer")
    return value


class LiveSession:
    """One free-running loop plus its command queue and frame fan-out."""

    def __init__(self, cfg: LoopConfig, initial_temp_deci: int = 250,
                 initial_setpoint_deci: int = 250, tick_interval_s: float = 0.1):
        scenario = Scenario(
            name="live",
            duration_ms=0,
            initial_temp_deci=initial_temp_deci,
            initial_setpoint_deci=initial_setpoint_deci,
        )
        self.loop = ControlLoop(cfg, scenario)
        self.tick_interval_s = tick_interval_s
        self.paused = False
        self._commands: queue.SimpleQueue = queue.SimpleQueue()
        self._subscribers: list[queue.Queue] = []
        self._lock = threading.Lock()
        self._last_frame: dict | None = None
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    # -- command path --------------------------------------------------

    def submit(self, command: Command) -> None:
        self._commands.put(command)

    def _apply(self, command: Command) -> None:
        if command.kind == "set_setpoint_deci":
            self.loop.apply_event(SetpointTemp(command.payload))
        elif command.kind == "set_setpoint_code":
            self.loop.apply_event(SetpointCode(command.payload))
        elif command.kind == "disturbance":
            self.loop.apply_event(Disturbance(command.payload))
        elif command.kind == "set_gains":
            self.loop.set_gains(command.payload)
        elif command.kind == "pause":
            self.paused = True
        elif command.kind == "resume":
            self.paused = False
        elif command.kind == "reset":
            self.loop.reset_dynamics()

    # -- frame fan-out --------------------------------------------------

    def subscribe(self) -> queue.Queue:
        q: queue.Queue = queue.Queue(maxsize=64)
        with self._lock:
            self._subscribers.append(q)
            if self._last_frame is not None:
                q.put_nowait(self._last_frame)
        return q

    def unsubscribe(self, q: queue.Queue) -> None:
        with self._lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    def _broadcast(self, frame: dict) -> None:
        with self._lock:
            for q in self._subscribers:
                try:
                    q.put_nowait(frame)
                except queue.Full:
                    # drop the oldest for a stalled client; never block the loop
                    try:
                        q.get_nowait()
                        q.put_nowait(frame)
                    except (queue.Empty, queue.Full):
                        pass

    # -- the paced loop ---------------------------------------------------

    def tick(self) -> dict | None:
        """One cycle boundary: drain commands, advance unless paused."""
        while True:
            try:
                self._apply(self._commands.get_nowait())
            except queue.Empty:
                break
        if self.paused:
            if self._last_frame is None:
                return None
            frame = dict(self._last_frame)
            frame["paused"] = True
        else:
            record = self.loop.step()
            frame = record_to_obj(record)
            frame["paused"] = False
        self._last_frame = frame
        self._broadcast(frame)
        return frame

    def _run(self) -> None:
        deadline = time.monotonic()
        while not self._stop.is_set():
            self.tick()
            deadline += self.tick_interval_s
            delay = deadline - time.monotonic()
            if delay > 0:
                self._stop.wait(delay)
            else:
                deadline = time.monotonic()  # fell behind; don't burst

    def start(self) -> None:
        self._thread = threading.Thread(target=self._run, name="greenloop-control", daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2.0)

    def snapshot(self) -> dict:
        cfg = self.loop.cfg
        return {
            "backend": backend_name(),
            "paused": self.paused,
            "config": {
                "control_period_ms": cfg.control_period_ms,
                "substeps": cfg.substeps,
                "gains": {"kp": self.loop.gains.kp, "ki": self.loop.gains.ki,
                          "kd": self.loop.gains.kd},
                "safety_threshold_deci": cfg.safety.threshold_deci,
                "plant": {
                    "t_amb_deci": cfg.plant.t_amb_deci,
                    "t_src_deci": cfg.plant.t_src_deci,
                    "k_passive_nano": cfg.plant.k_passive_nano,
                    "k_fan_nano": cfg.plant.k_fan_nano,
                    "k_src_nano": cfg.plant.k_src_nano,
                    "dt_sub_ms": cfg.plant.dt_sub_ms,
                },
                "seed": cfg.seed,
                "setpoint_deci": pot_code_to_setpoint(self.loop.pot_code),
            },
            "last": self._last_frame,
        }


# --- HTTP layer -------------------------------------------------------------


def _make_handler(session: LiveSession, ui_dir: Path | None):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _cors(self) -> None:
            self.send_header("Access-Control-Allow-Origin", "*")

        def _send_json(self, status: int, obj: dict) -> None:
            body = (json.dumps(obj) + "\n").encode()
            self.send_response(status)
            self._cors()
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_OPTIONS(self):
            self.send_response(204)
            self._cors()
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Content-Length", "0")
            self.end_headers()

        def do_GET(self):
            if self.path == "/stream":
                self._stream()
            elif self.path == "/snapshot":
                self._send_json(200, session.snapshot())
            elif ui_dir is not None:
                self._static()
            else:
                self._send_json(
                    200 if self.path == "/" else 404,
                    {"endpoints": ["/stream", "/snapshot", "/command"]},
                )

        def _stream(self):
            self.send_response(200)
            self._cors()
            self.send_header("Content-Type", "application/x-ndjson")
            self.send_header("Cache-Control", "no-store")
            self.send_header("Connection", "close")
            self.end_headers()
            q = session.subscribe()
            try:
                while True:
                    try:
                        frame = q.get(timeout=5.0)
                    except queue.Empty:
                        continue
                    self.wfile.write((json.dumps(frame, separators=(",", ":")) + "\n").encode())
                    self.wfile.flush()
            except (BrokenPipeError, ConnectionResetError):
                pass
            finally:
                session.unsubscribe(q)

        def do_POST(self):
            if self.path != "/command":
                self._send_json(404, {"ok": False, "error": "unknown endpoint"})
                return
            length = int(self.headers.get("Content-Length", "0"))
            raw = self.rfile.read(length)
            try:
                obj = json.loads(raw)
                command = parse_command(obj)
            except (json.JSONDecodeError, CommandError) as exc:
                self._send_json(400, {"ok": False, "error": str(exc)})
                return
            session.submit(command)
            self._send_json(200, {"ok": True})

        def _static(self):
            rel = self.path.lstrip("/") or "index.html"
            target = (ui_dir / rel).resolve()
            if not target.is_file() or ui_dir.resolve() not in target.parents:
                self._send_json(404, {"ok": False, "error": "not found"})
                return
            ctype = {
                ".html": "text/html",
                ".js": "text/javascript",
                ".css": "text/css",
                ".map": "application/json",
            }.get(target.suffix, "application/octet-stream")
            body = target.read_bytes()
            self.send_response(200)
            self._cors()
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

    return Handler


def serve(
    port: int,
    cfg: LoopConfig | None = None,
    initial_temp_deci: int = 250,
    initial_setpoint_deci: int = 250,
    host: str = "127.0.0.1",
    ui_dir: Path | None = None,
) -> tuple[ThreadingHTTPServer, LiveSession]:
    """Start the session thread and HTTP server; caller runs serve_forever."""
    session = LiveSession(
        cfg or LoopConfig(),
        initial_temp_deci=initial_temp_deci,
        initial_setpoint_deci=initial_setpoint_deci,
    )
    session.start()
    server = ThreadingHTTPServer((host, port), _make_handler(session, ui_dir))
    server.daemon_threads = True
    return server, session
