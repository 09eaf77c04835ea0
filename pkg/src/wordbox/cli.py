"""Command-line entry point: ``wordbox generate | stats | preview``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from wordbox.config import ABLATIONS, ConfigError, load_config
from wordbox.pipeline import ManifestError, generate_batch, preview, stats
from wordbox.resources import ResourceError


def _config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="YAML config merged over the packaged defaults")
    parser.add_argument("--disable", action="append", default=[], choices=sorted(ABLATIONS),
                        metavar="FUNCTION", help="switch off one rendering function (repeatable): "
                        + ", ".join(sorted(ABLATIONS)))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wordbox", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a labelled word-box image set")
    _config_args(gen)
    gen.add_argument("--count", type=int)
    gen.add_argument("--seed", type=int)
    gen.add_argument("--workers", type=int)
    gen.add_argument("--output", type=Path)
    gen.add_argument("--format", choices=("png", "jpg"))

    st = sub.add_parser("stats", help="length and character statistics of a manifest")
    st.add_argument("--manifest", type=Path, required=True)

    pv = sub.add_parser("preview", help="render samples with every intermediate stage")
    _config_args(pv)
    pv.add_argument("--count", type=int, default=8)
    pv.add_argument("--seed", type=int)
    pv.add_argument("--output", type=Path, default=Path("preview"))
    return parser


def _overrides(args) -> dict:
    pairs = {
        "output.count": getattr(args, "count", None) if args.command == "generate" else None,
        "output.seed": args.seed,
        "output.workers": getattr(args, "workers", None),
        "output.dir": str(args.output) if args.command == "generate" and args.output else None,
        "output.format": getattr(args, "format", None),
    }
    return {k: v for k, v in pairs.items() if v is not None}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "stats":
            report = stats(args.manifest)
            json.dump(report, sys.stdout, ensure_ascii=False, indent=2)
            sys.stdout.write("\n")
            return 0
        cfg = load_config(args.config, _overrides(args), args.disable)
        if args.command == "generate":
            summary = generate_batch(cfg)
            print(json.dumps({k: v for k, v in summary.to_dict().items() if k != "config"}, indent=2))
        else:
            traces = preview(cfg, args.count, args.output)
            print(f"wrote {len(traces)} previews to {args.output}")
        return 0
    except (ConfigError, ResourceError, ManifestError, OSError) as exc:
        print(f"wordbox: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
