"""Command-line front end: encode, decode, sweep, compare, gains, fbl.

Exit status is 0 on success, 2 for malformed input and 3 when a
numerical routine fails to converge.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .channel import ChannelObservation
from .decoder import DECODERS, emap_ssc_decode, ordered_statistics_decode, two_stage_magnitude_decode
from .encoder import encode
from .errors import OSSError, QuadratureNonConvergence
from .simulate import (
    SweepPlan,
    compare_report,
    default_gain_rows,
    fbl_table,
    gain_table,
    points_to_csv,
    points_to_json,
    run_sweep,
)
from .spec import CodeSpec, validate_spec

EXIT_INPUT = 2
EXIT_NUMERIC = 3

_SINGLE_DECODERS = {
    "emap_ssc": emap_ssc_decode,
    "ordered_stats": ordered_statistics_decode,
    "two_stage": two_stage_magnitude_decode,
}


class InputError(Exception):
    pass


def bits_to_hex(bits, width: int) -> str:
    value = int("".join(str(int(b)) for b in bits) or "0", 2)
    return format(value, f"0{(width + 3) // 4}x") if width else ""


def hex_to_bits(text: str, width: int) -> list[int]:
    text = text.strip().lower().removeprefix("0x")
    try:
        value = int(text, 16) if text else 0
    except ValueError as exc:
        raise InputError(f"not a hex string: {text!r}") from exc
    if value >> width:
        raise InputError(f"hex value needs more than {width} bits")
    return [(value >> (width - 1 - i)) & 1 for i in range(width)]


def parse_grid(text: str) -> list[float]:
    try:
        if ":" in text:
            start, step, stop = (float(v) for v in text.split(":"))
            if step <= 0:
                raise InputError("grid step must be positive")
            count = int(round((stop - start) / step)) + 1
            return [round(start + i * step, 10) for i in range(count)]
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise InputError(f"bad Eb/N0 grid {text!r}") from exc


def load_spec(path: str) -> CodeSpec:
    try:
        spec = CodeSpec.from_json(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read spec {path}: {exc}") from exc
    validate_spec(spec)
    return spec


def _emit(payload, out: str | None, csv_text: str | None = None) -> None:
    """JSON by default; CSV for tables when writing to stdout or a ``.csv`` file."""
    if csv_text is not None and not (out and out.endswith(".json")):
        text = csv_text
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def cmd_encode(args) -> None:
    spec = load_spec(args.spec)
    vs = validate_spec(spec)
    text = args.bits if args.bits is not None else Path(args.input).read_text()
    bits = hex_to_bits(text, vs.total_bits)
    codeword, placements = encode(vs, bits)
    _emit({
        "bits": bits_to_hex(bits, vs.total_bits),
        "num_bits": vs.total_bits,
        "codeword": codeword.tolist(),
        "placements": [p.to_dict() for p in placements],
    }, args.out)


def cmd_decode(args) -> None:
    spec = load_spec(args.spec)
    vs = validate_spec(spec)
    try:
        obs = json.loads(Path(args.input).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read observation {args.input}: {exc}") from exc
    if isinstance(obs, list):
        obs = {"y": obs}
    y = obs.get("y", obs.get("codeword"))
    sigma = args.sigma if args.sigma is not None else obs.get("sigma")
    if y is None or sigma is None:
        raise InputError("observation needs samples 'y' and a sigma")
    try:
        observation = ChannelObservation(np.asarray(y, dtype=float), float(sigma))
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    if observation.y.shape != (vs.n,):
        raise InputError(f"observation length {observation.y.size} != N={vs.n}")
    result = _SINGLE_DECODERS[args.decoder](vs, observation)
    payload = result.to_dict()
    payload["bits_hex"] = bits_to_hex(result.bits, vs.total_bits)
    _emit(payload, args.out)


def _plan(args) -> SweepPlan:
    return SweepPlan(
        spec=load_spec(args.spec),
        ebn0_grid_db=parse_grid(args.ebn0),
        max_trials=args.max_trials,
        target_errors=args.target_errors,
        seed=args.seed,
        decoder=args.decoder,
        chunk_size=args.chunk_size,
    )


def cmd_sweep(args) -> None:
    points = run_sweep(_plan(args), workers=args.workers)
    _emit(points_to_json(points), args.out, points_to_csv(points))


def cmd_compare(args) -> None:
    rows = compare_report(_plan(args), workers=args.workers)
    _emit(rows, args.out, _rows_to_csv(rows))


def cmd_gains(args) -> None:
    rows = []
    for item in args.row or []:
        kind, _, n = item.partition(":")
        if not n.isdigit():
            raise InputError(f"row must look like kind:N, got {item!r}")
        rows.append((kind, int(n)))
    for path in args.spec or []:
        rows.append(("spec", load_spec(path)))
    table = gain_table(rows or default_gain_rows())
    _emit(table, args.out, _rows_to_csv(table))


def cmd_fbl(args) -> None:
    try:
        grid = [int(v) for v in args.n_grid.split(",")]
    except ValueError as exc:
        raise InputError(f"bad N grid {args.n_grid!r}") from exc
    specs = [load_spec(p) for p in args.spec or []]
    rows = fbl_table(args.snr_db, args.epsilon, grid, specs, trials=args.trials, seed=args.seed,
                     decoder=args.decoder)
    _emit(rows, args.out, _rows_to_csv(rows))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oss", description="Orthogonal sparse superposition codes")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("encode", help="encode a hex message into a codeword")
    e.add_argument("--spec", required=True)
    src = e.add_mutually_exclusive_group(required=True)
    src.add_argument("--bits", help="message as a big-endian hex integer")
    src.add_argument("--in", dest="input", help="file holding the hex message")
    e.add_argument("--out")
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="decode an observation file")
    d.add_argument("--spec", required=True)
    d.add_argument("--in", dest="input", required=True, help='JSON {"y": [...], "sigma": s}')
    d.add_argument("--sigma", type=float)
    d.add_argument("--decoder", choices=sorted(DECODERS), default="emap_ssc")
    d.add_argument("--out")
    d.set_defaults(func=cmd_decode)

    for name, func, help_ in (
        ("sweep", cmd_sweep, "Monte Carlo BLER versus Eb/N0"),
        ("compare", cmd_compare, "Monte Carlo BLER next to the analytic value"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--spec", required=True)
        s.add_argument("--ebn0", required=True, help="start:step:stop (inclusive) or a comma list, dB")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--max-trials", type=int, default=100_000)
        s.add_argument("--target-errors", type=int, default=100)
        s.add_argument("--decoder", choices=sorted(DECODERS), default="emap_ssc")
        s.add_argument("--workers", type=int, default=1)
        s.add_argument("--chunk-size", type=int, default=1000)
        s.add_argument("--out", help="output file, .csv or .json (CSV on stdout otherwise)")
        s.set_defaults(func=func)

    g = sub.add_parser("gains", help="coding gain table")
    g.add_argument("--row", action="append", help="kind:N with kind in oss_single, oss_two_layer, biorthogonal")
    g.add_argument("--spec", action="append")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gains)

    f = sub.add_parser("fbl", help="finite-blocklength rate table")
    f.add_argument("--snr-db", type=float, default=-3.0)
    f.add_argument("--epsilon", type=float, default=1e-3)
    f.add_argument("--n-grid", default="32,64,128,256")
    f.add_argument("--spec", action="append", help="candidate OSS spec (repeatable)")
    f.add_argument("--trials", type=int, default=20_000)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--decoder", choices=sorted(DECODERS), default="emap_ssc")
    f.add_argument("--out")
    f.set_defaults(func=cmd_fbl)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except QuadratureNonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InputError, OSSError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
