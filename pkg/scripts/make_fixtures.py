"""Write the JSON fixtures used by the CLI tests and the README examples.

    python3 scripts/make_fixtures.py [outdir]
"""

import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from crystalforms.calculus import Differential, TabulatedForm
from crystalforms.configspace import ConfigSpace
from crystalforms.crystal import parse_builtin
from crystalforms.fixtures import random_invariant_function, random_zetas, seed_graphs
from crystalforms.interaction import builtin
from crystalforms.linalg import format_q
from crystalforms.varadhan import AFunction


def dump(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def main(out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for spec in ("euclidean(1)", "euclidean(2)", "hexagonal", "triangular", "diamond"):
        name = spec.replace("(", "").replace(")", "")
        dump(out / f"lattice_{name}.json", parse_builtin(spec).to_json())
    for name, g in seed_graphs().items():
        dump(out / f"seed_{name}.json", g.to_json())
    for name in ("exclusion", "two_species", "identity"):
        dump(out / f"interaction_{name}.json", builtin(name).to_json())
    dump(out / "interaction_malformed.json",
         {"states": ["0", "1"], "base": "0", "phi": [{"in": ["0", "1"], "out": ["1", "1"]}]})

    lat = parse_builtin("euclidean(2)")
    space = ConfigSpace(lat, builtin("exclusion"))
    dump(out / "form_zero.json", {"kind": "zero", "radius": 1})
    xi = {"0": Fraction(0), "1": Fraction(1)}
    a1 = Differential(AFunction(xi, 1, "0"), space)
    dump(out / "form_dA1_euclidean2.json", TabulatedForm.from_form(a1, lat, space, 1).to_json())

    hexa = parse_builtin("hexagonal")
    hspace = ConfigSpace(hexa, builtin("exclusion"))
    rng = random.Random(2024)
    g0 = random_invariant_function(hexa, hspace.interaction.states, "0", rng)
    zetas = random_zetas(hspace, hexa.rank, rng)
    dump(out / "form_exact_hexagonal.json",
         {"kind": "exact", "radius": 2, "g": g0.to_json(),
          "zetas": [{s: format_q(v) for s, v in z.items()} for z in zetas]})


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "fixtures")
