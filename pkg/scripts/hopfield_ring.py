#!/usr/bin/env python3
"""Unroll a small Hopfield ring and scan its measurement structure.

Three cells, one embedded attractor, one time step. Because the units are
strictly positive every glued mechanism is surjective, so the whole quale
exists. Prints the quale size, the precision of the full measurement for
each observed output pattern, and entanglement across every partition of the
initial occasions.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from distmeas.entangle import entanglement, enumerate_partitions
from distmeas.lattice import build_quale, top
from distmeas.measure import effective_information, system_output_space
from distmeas.stoch import dirac
from distmeas.system import automaton, hopfield_rule, hopfield_weights, unroll, validate

TEMPERATURE = "1/2"
ATTRACTOR = [1, 0, 1]


def main():
    cells = ["n0", "n1", "n2"]
    weights = hopfield_weights([ATTRACTOR])
    rules = {
        c: hopfield_rule([weights[j][k] for j in range(3)], TEMPERATURE)
        for k, c in enumerate(cells)}
    auto = automaton(
        cells=cells,
        neighborhoods={c: list(cells) for c in cells},
        rules=rules,
        window=(0, 1),
        initial={c: str(b) for c, b in zip(cells, ATTRACTOR)},
    )
    spec = unroll(auto)
    problems = validate(spec)
    assert not problems, problems
    print(f"unrolled: {len(spec.occasions)} occasions, {len(spec.edges)} edges")

    quale = build_quale(spec)
    print(f"quale: {len(quale)} sections")

    whole = top(spec)
    out_space = system_output_space(spec)
    print(f"\n{'output':>8} {'ei(top) bits':>13}")
    for pattern in out_space.iter_symbols():
        d_out = dirac(out_space, pattern)
        ei = effective_information(spec, whole, None, d_out)
        print(f"{''.join(pattern):>8} {ei:13.6f}")

    attractor_out = dirac(out_space, tuple(str(b) for b in ATTRACTOR))
    print(f"\nentanglement at output {''.join(str(b) for b in ATTRACTOR)}:")
    for part in enumerate_partitions(whole.source_ids()):
        rep = entanglement(spec, whole, part, attractor_out)
        print(f"  {part.label():24} gamma={rep.gamma_bits:.6f} "
              f"gap={rep.additivity_gap:.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
