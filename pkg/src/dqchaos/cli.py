"""Command-line entry point: ``dqchaos {fig1,fig2,fig3,fig4,oracle,classical}``."""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import ConfigurationError, FormatError, NumericalGuardError
from .experiments import KINDS, CampaignConfig, load_config, preset, run_campaign

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GUARD = 3

log = logging.getLogger("dqchaos")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dqchaos",
                                 description="Dissipative quantum chaos campaigns")
    ap.add_argument("kind", choices=KINDS)
    ap.add_argument("--config", help="campaign JSON (or a previous manifest.json)")
    ap.add_argument("--preset", help="named parameter set, e.g. fig1-left, fig1-right")
    ap.add_argument("--seed", type=int, help="unsigned 64-bit master seed")
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--threads", type=int, help="worker processes")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def resolve_config(args) -> CampaignConfig:
    if args.config:
        cfg = load_config(args.config)
    else:
        cfg = preset(args.preset or args.kind)
    if cfg.kind != args.kind:
        raise ConfigurationError(f"configuration is for {cfg.kind!r}, not {args.kind!r}")
    d = cfg.to_dict()
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {args.seed}")
        d["seed"] = args.seed
    if args.out is not None:
        d["out"] = args.out
    if args.threads is not None:
        d["threads"] = args.threads
    return CampaignConfig.from_dict(d)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        log.info("running %s into %s", cfg.kind, cfg.out)
        result = run_campaign(cfg)
    except (ConfigurationError, FormatError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalGuardError as exc:
        print(f"numerical guard tripped: {exc}", file=sys.stderr)
        return EXIT_GUARD
    print(f"{cfg.kind}: wrote {result.manifest}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
