"""Emit one certificate per witness kind into a directory and re-check each."""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from acyclic_matching import constructions as cons
from acyclic_matching import linear_core as lc
from acyclic_matching.certificates import WitnessCertificate, linear_certificate, lmp_certificate, verify_certificate
from acyclic_matching.fields import make_tower
from acyclic_matching.group_core import cyclic


@dataclass
class GalleryConfig:
    out_dir: Path
    qr_prime: int = 13
    cycle_prime: int = 13
    cycle_order: int = 6
    window: int = 40
    linear_m: int = 2


def build(cfg: GalleryConfig) -> dict[str, WitnessCertificate]:
    L = make_tower(5, 7)
    lmp_tower = make_tower(3, 4)
    certs = {
        f"qr_p{cfg.qr_prime}": cons.qr_witness(cfg.qr_prime),
        f"cycle_p{cfg.cycle_prime}_k{cfg.cycle_order}": cons.cycle_witness(cfg.cycle_prime, cfg.cycle_order),
        "pairing_p11": cons.pairing_witness(11),
        "failure_z7_m4": cons.failure_witness(cyclic(7), 4),
        f"linear_gf5^7_m{cfg.linear_m}": linear_certificate(lc.linear_witness(L, cfg.linear_m)),
        "transcendental_m3": linear_certificate(lc.transcendental_witness(3)),
        "lmp_gf3^4": lmp_certificate(lmp_tower, lc.lmp_counterexample_search(lmp_tower).value),
    }
    for v in cons.WINDOW_VARIANTS:
        certs[f"window_{v}_{cfg.window}"] = cons.window_witness(v, cfg.window)
    return certs


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out_dir", type=Path)
    args = ap.parse_args(argv)
    cfg = GalleryConfig(args.out_dir)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for name, cert in build(cfg).items():
        path = cfg.out_dir / f"{name}.json"
        path.write_text(cert.to_json())
        ok, _ = verify_certificate(WitnessCertificate.from_json(path.read_text()))
        print(f"{'ok ' if ok else 'BAD'} {path}")


if __name__ == "__main__":
    main()
