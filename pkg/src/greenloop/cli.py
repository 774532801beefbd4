"""Command-line front end: batch scenario runs and the live service.

    greenloop run --scenario step_response --out a.csv
    greenloop run --scenario my_scenario.txt --format jsonl --out log.jsonl
    greenloop serve --port 8764 --ui frontend

Exit codes: 0 success, 2 configuration error (unknown scenario, bad
override, bad scenario file), 3 I/O failure.
"""

import argparse
import sys
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

from . import __version__
from ._backend import backend_name
from .controller import PidGains
from .plant import PlantParams, rate_to_nano
from .scenario_file import parse_scenario
from .sim_engine import BUILTIN_SCENARIOS, LoopConfig, Scenario, ScenarioError, run_scenario
from .telemetry import metrics_to_json, write_csv, write_jsonl

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


def _deci(text: str) -> int:
    """Degrees C with 0.1 resolution -> deci-degrees, exactly."""
    value = Fraction(text) * 10
    if value.denominator != 1:
        raise argparse.ArgumentTypeError(f"{text} is finer than the 0.1 C resolution")
    return int(value)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greenloop",
        description="Deterministic greenhouse fan-loop simulator (PID + plant twin)",
    )
    parser.add_argument("--version", action="version", version=f"greenloop {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario to completion")
    run.add_argument("--scenario", required=True,
                     help=f"built-in name ({', '.join(sorted(BUILTIN_SCENARIOS))}) or scenario file path")
    run.add_argument("--out", type=Path, help="log output path")
    run.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    run.add_argument("--metrics-out", type=Path,
                     help="metrics JSON path (default: <out>.metrics.json)")
    run.add_argument("--duration", type=float, metavar="SECONDS",
                     help="override the scenario duration")
    run.add_argument("--seed", type=int, default=0)
    _add_loop_overrides(run)

    srv = sub.add_parser("serve", help="run the live loop behind a local HTTP port")
    srv.add_argument("--port", type=int, default=8764)
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--setpoint", type=_deci, default=250, metavar="DEG_C",
                     help="initial setpoint (20.0-40.0)")
    srv.add_argument("--initial-temp", type=_deci, default=250, metavar="DEG_C")
    srv.add_argument("--seed", type=int, default=0)
    srv.add_argument("--ui", type=Path, help="directory with the operator console build")
    _add_loop_overrides(srv)

    return parser


def _add_loop_overrides(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kp", type=int, help="proportional gain (counts per deci-degree)")
    p.add_argument("--ki", type=int, help="integral gain (counts per deci-degree-cycle)")
    p.add_argument("--kd", type=int, help="derivative gain (counts per deci-degree)")
    p.add_argument("--t-amb", type=_deci, metavar="DEG_C", help="ambient temperature")
    p.add_argument("--t-src", type=_deci, metavar="DEG_C", help="disturbance source temperature")
    p.add_argument("--k-passive", help="passive coupling rate, 1/s")
    p.add_argument("--k-fan", help="full-duty fan coupling rate, 1/s")
    p.add_argument("--k-src", help="disturbance coupling rate, 1/s")


def _loop_config(args) -> LoopConfig:
    gains = PidGains(
        kp=args.kp if args.kp is not None else PidGains().kp,
        ki=args.ki if args.ki is not None else PidGains().ki,
        kd=args.kd if args.kd is not None else PidGains().kd,
    )
    base = PlantParams()
    plant = PlantParams(
        t_amb_deci=args.t_amb if args.t_amb is not None else base.t_amb_deci,
        t_src_deci=args.t_src if args.t_src is not None else base.t_src_deci,
        k_passive_nano=rate_to_nano(args.k_passive) if args.k_passive is not None else base.k_passive_nano,
        k_fan_nano=rate_to_nano(args.k_fan) if args.k_fan is not None else base.k_fan_nano,
        k_src_nano=rate_to_nano(args.k_src) if args.k_src is not None else base.k_src_nano,
    )
    duration_ms = None
    if getattr(args, "duration", None) is not None:
        if args.duration < 0:
            raise ValueError("--duration must be >= 0")
        duration_ms = round(args.duration * 1000)
    return LoopConfig(gains=gains, plant=plant, duration_ms=duration_ms, seed=args.seed)


def _load_scenario(spec: str) -> Scenario:
    if spec in BUILTIN_SCENARIOS:
        return BUILTIN_SCENARIOS[spec]()
    path = Path(spec)
    if path.exists():
        return parse_scenario(path.read_text())
    raise ScenarioError(
        f"unknown scenario {spec!r}: not a built-in "
        f"({', '.join(sorted(BUILTIN_SCENARIOS))}) and no such file"
    )


def _cmd_run(args) -> int:
    try:
        cfg = _loop_config(args)
        scenario = _load_scenario(args.scenario)
    except (ValueError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error reading scenario: {exc}", file=sys.stderr)
        return EXIT_IO

    records, metrics = run_scenario(cfg, scenario)

    try:
        if args.out is not None:
            with open(args.out, "w", newline="") as fp:
                if args.format == "csv":
                    write_csv(records, fp)
                else:
                    write_jsonl(records, fp)
        metrics_path = args.metrics_out
        if metrics_path is None and args.out is not None:
            metrics_path = args.out.with_name(args.out.name + ".metrics.json")
        if metrics_path is not None and records:
            metrics_path.write_text(metrics_to_json(metrics))
    except OSError as exc:
        print(f"error writing output: {exc}", file=sys.stderr)
        return EXIT_IO

    print(f"scenario             {scenario.name}")
    print(f"cycles               {len(records)}")
    print(f"backend              {backend_name()}")
    for key, value in asdict(metrics).items():
        print(f"{key:<20} {value if value is not None else 'none'}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    from .service import serve  # deferred: keeps batch runs free of the HTTP stack

    try:
        cfg = _loop_config(args)
        ui_dir = None
        if args.ui is not None:
            ui_dir = args.ui
            if not (ui_dir / "index.html").is_file():
                raise ValueError(f"--ui {ui_dir} has no index.html")
        server, session = serve(
            args.port,
            cfg,
            initial_temp_deci=args.initial_temp,
            initial_setpoint_deci=args.setpoint,
            host=args.host,
            ui_dir=ui_dir,
        )
    except (ValueError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error binding {args.host}:{args.port}: {exc}", file=sys.stderr)
        return EXIT_IO

    print(f"greenloop live on http://{args.host}:{args.port} "
          f"(stream/command/snapshot; backend {backend_name()})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        session.stop()
        server.server_close()
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "serve":
        return _cmd_serve(args)
    return EXIT_CONFIG  # unreachable: subparsers are required


if __name__ == "__main__":
    sys.exit(main())
