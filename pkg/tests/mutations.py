"""Schema-preserving single-field trace mutations for negative controls.

Every mutation changes exactly one semantic field of the JSON trace object
to a different, still well-typed value, so the checker must catch it with a
check failure rather than a schema rejection.
"""

import random
from fractions import Fraction

from rbl._util import frac_str, parse_frac


def _bump_frac(text, delta=1):
    q = parse_frac(text)
    return frac_str(Fraction(q.numerator + delta, q.denominator))


def _candidate_mutations(obj, n):
    """List of (label, apply) pairs valid for this trace object."""
    muts = []
    muts.append(("p0", lambda o: o.__setitem__("p0", _bump_frac(o["p0"]))))

    for i, step in enumerate(obj["steps"]):
        def on_step(field, value, i=i):
            def apply(o):
                o["steps"][i][field] = value
            return apply

        if step["p"] is not None:
            muts.append((f"step{i}.p", on_step("p", _bump_frac(step["p"]))))
        if step["h"] is not None:
            muts.append((f"step{i}.h", on_step("h", step["h"] + 1)))
        muts.append((f"step{i}.alpha", on_step("alpha", _bump_frac(step["alpha"]))))
        muts.append((f"step{i}.x_size", on_step("x_size", step["x_size"] + 1)))
        muts.append((f"step{i}.y_size", on_step("y_size", max(0, step["y_size"] - 1))))
        if step["beta"] is not None:
            muts.append((f"step{i}.beta", on_step("beta", _bump_frac(step["beta"]))))
        if step["central_vertex"] is not None:
            swapped = (step["central_vertex"] + 1) % n
            muts.append((f"step{i}.central_vertex", on_step("central_vertex", swapped)))
            other = "DensityBoost" if step["kind"] == "Red" else "Red"
            muts.append((f"step{i}.kind", on_step("kind", other)))
        if step["spine"] is not None:
            spine = list(step["spine"])
            outside = next(v for v in range(n) if v not in spine)
            spine[0] = outside
            muts.append((f"step{i}.spine", on_step("spine", sorted(set(spine)))))
        if step["pages"] is not None:
            muts.append((f"step{i}.pages", on_step("pages", step["pages"] + 1)))
        if step["removed_count"] is not None:
            muts.append((f"step{i}.removed_count",
                         on_step("removed_count", step["removed_count"] + 1)))

    summary = obj["summary"]
    for key in ("t", "s", "big_blue_count", "final_Y_size"):
        muts.append((f"summary.{key}",
                     lambda o, key=key: o["summary"].__setitem__(key, summary[key] + 1)))
    muts.append(("summary.beta_harmonic",
                 lambda o: o["summary"].__setitem__(
                     "beta_harmonic", _bump_frac(summary["beta_harmonic"]))))
    reasons = ["x_small", "p_small", "exhausted", "red_clique_complete",
               "blue_clique_complete", "no_central_vertex"]
    other_reason = next(r for r in reasons if r != summary["halting_reason"])
    muts.append(("summary.halting_reason",
                 lambda o: o["summary"].__setitem__("halting_reason", other_reason)))

    def grow_final_a(o):
        got = list(o["summary"]["final_A"])
        extra = next(v for v in range(n) if v not in got)
        o["summary"]["final_A"] = sorted(got + [extra])
    muts.append(("summary.final_A", grow_final_a))

    used = set(obj["x0"]) | set(obj["y0"])
    free = [v for v in range(n) if v not in used]
    if free and obj["x0"]:
        def swap_x0(o):
            x0 = list(o["x0"])
            x0[0] = free[0]
            o["x0"] = sorted(x0)
        muts.append(("x0.member", swap_x0))
    return muts


def mutate_trace_obj(obj, n, rng: random.Random):
    """Apply one randomly chosen single-field mutation in place; returns its label."""
    muts = _candidate_mutations(obj, n)
    label, apply = rng.choice(muts)
    apply(obj)
    return label
