"""Command-line front end: flags mirror BackendConfig."""

import argparse
import sys

from .server import BackendConfig, serve


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlibackend",
        description="Serve question+answer -> statement conversions on stdin/stdout.",
    )
    parser.add_argument("--model", required=True, help="checkpoint path or model identifier")
    parser.add_argument("--max-length", type=int, default=64, help="max output tokens (>= 8)")
    parser.add_argument("--beams", type=int, default=1, help="beam width (>= 1)")
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--separator", default="</s>", help="question/answer separator token")
    parser.add_argument("--seed", type=int, default=None)
    return parser


def main() -> None:
    args = build_parser().parse_args()
    config = BackendConfig(
        model=args.model,
        max_output_length=args.max_length,
        beam_width=args.beams,
        device=args.device,
        separator=args.separator,
        seed=args.seed,
    )
    try:
        config.validate()
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        sys.exit(2)
    sys.exit(serve(config))


if __name__ == "__main__":
    main()
