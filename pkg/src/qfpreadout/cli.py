"""Command line entry point: ``qfpreadout sweep`` and ``qfpreadout recipes``."""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError
from .sweep import list_recipes, make_config, parse_overrides, read_config_text, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_POINT_FAILURE = 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qfpreadout", description="Flux-qubit readout sweeps")
    sub = p.add_subparsers(dest="command", required=True)
    sw = sub.add_parser("sweep", help="run a recipe and write CSV")
    sw.add_argument("--recipe", help="recipe name (see `recipes`)")
    sw.add_argument("--config", help="INI file with [sweep], [model], [measurement], [qfp], [overlap]")
    sw.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE", help="override a setting")
    sw.add_argument("--out", help="output CSV path")
    sub.add_parser("recipes", help="list recipes and their defaults")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "recipes":
        sys.stdout.write(list_recipes())
        return EXIT_OK
    try:
        file_settings, lines = {}, {}
        if args.config:
            try:
                with open(args.config, encoding="utf-8") as fh:
                    file_settings, lines = read_config_text(fh.read())
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc}") from None
        cfg = make_config(file_settings, parse_overrides(args.set), args.recipe, args.out, lines)
        if not cfg.out_path:
            raise ConfigError("no output path (--out or sweep.out)", field="sweep.out")
        res = run_sweep(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    bad = sum(r.status != "ok" for r in res.rows)
    print(f"wrote {len(res.rows)} rows to {cfg.out_path}" + (f" ({bad} failed)" if bad else ""))
    return EXIT_POINT_FAILURE if bad else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
