"""Command line surface: generate, sample, stats, estimate, predict, verify.

Runs are reproducible: the seed defaults to 0, the NETLAB_SEED
environment variable overrides --seed when set, and every run echoes
its fully resolved configuration as the first output line.  Exit codes:
0 success, 1 domain failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import generators, graphs, inference, predict, sampling, stats
from .errors import NetlabError, ValidationError


def _floats(text: str) -> tuple:
    return tuple(float(v) for v in text.split(","))


def _partition(text: str) -> graphs.Partition:
    return graphs.Partition(
        graphs._canonical_block_ids([int(v) for v in text.split(",")])
    )


def parse_model_spec(text: str):
    """Parse a key=value model description into (spec, size budget).

    Examples: ``model=er p=0.3 n=100``, ``model=sbm p=0.8 q=0.1 B=1,1,2``,
    ``model=graphon grid=0.9,0.1,0.1,0.9 n=20``.  Partitions are block-id
    lists, grids row-major comma lists, covariate rows ';'-separated.
    """
    fields = {}
    for token in text.split():
        key, eq, value = token.partition("=")
        if not eq:
            raise ValidationError(f"malformed model token {token!r}")
        fields[key] = value
    kind = fields.pop("model", None)
    if kind is None:
        raise ValidationError("model description needs a model=<family> entry")
    try:
        if kind == "er":
            return generators.ER(float(fields["p"])), int(fields["n"])
        if kind == "beta":
            return generators.Beta(_floats(fields["beta"])), None
        if kind == "sbm":
            return (
                generators.SBM(float(fields["p"]), float(fields["q"]), _partition(fields["B"])),
                None,
            )
        if kind == "graphon":
            flat = _floats(fields["grid"])
            k = round(len(flat) ** 0.5)
            if k * k != len(flat):
                raise ValidationError("grid list length must be a perfect square")
            grid = tuple(tuple(flat[r * k + c] for c in range(k)) for r in range(k))
            return generators.Graphon(grid), int(fields["n"])
        if kind == "ergm":
            return (
                generators.ERGM(
                    tuple(fields["stats"].split(",")), _floats(fields["theta"]), int(fields["n"])
                ),
                None,
            )
        if kind == "pa":
            return generators.PA(float(fields["delta"])), int(fields["n"])
        if kind == "superstar":
            return (
                generators.Superstar(float(fields["p"]), float(fields["delta"])),
                int(fields["n"]),
            )
        if kind == "edge-exch":
            return (
                generators.EdgeExch(
                    float(fields["alpha"]), float(fields["theta"]), int(fields["K"])
                ),
                int(fields["m"]),
            )
        if kind == "covariate":
            rows = tuple(_floats(row) for row in fields["x"].split(";"))
            return generators.Covariate(_floats(fields["theta"]), rows), None
    except KeyError as exc:
        raise ValidationError(f"model {kind!r} is missing field {exc}") from None
    raise ValidationError(f"unknown model family {kind!r}")


def _resolve_seed(args) -> int:
    env = os.environ.get("NETLAB_SEED")
    return int(env) if env is not None else args.seed


def _echo_config(name: str, resolved: dict) -> None:
    body = " ".join(f"{k}={v}" for k, v in resolved.items())
    print(f"config={name} {body}".rstrip())


def _write_output(text: str, out) -> None:
    if out:
        from pathlib import Path

        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_labeled_edges(text: str) -> tuple:
    pairs = []
    for token in text.split(","):
        a, _, b = token.partition("-")
        pairs.append((int(a), int(b)))
    return tuple(pairs)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_generate(args) -> int:
    seed = _resolve_seed(args)
    spec, budget = parse_model_spec(args.model)
    _echo_config("generate", {"model": f'"{args.model}"', "seed": seed, "out": args.out or "-"})
    g = generators.generate(spec, seed, n=budget)
    _write_output(graphs.to_text(g), args.out)
    return 0


def _load_mu_table(path):
    entries = {}
    n = None
    for raw in open(path):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            key, _, value = line.partition("=")
            if key != "n":
                raise ValidationError("table file must start with n=<n>")
            n = int(value)
            continue
        idx, prob = line.split()
        entries[int(idx)] = float(prob)
    if n is None:
        raise ValidationError("empty table file")
    all_graphs = graphs.enumerate_graphs(n)
    return {all_graphs[i]: entries.get(i, 0.0) for i in range(len(all_graphs))}


def cmd_sample(args) -> int:
    seed = _resolve_seed(args)
    _echo_config(
        "sample",
        {"mechanism": args.mechanism, "size": args.size, "seed": seed, "in": args.infile},
    )
    g = graphs.load(args.infile)
    trailer = ""
    if args.mechanism == "canonical":
        obs = sampling.canonical(g, args.size)
        out, prov = obs.graph, obs.provenance
    elif args.mechanism == "vertex":
        obs = sampling.vertex_sample(g, args.size, seed)
        out, prov = obs.graph, obs.provenance
    elif args.mechanism == "edge":
        obs = sampling.edge_sample(g, args.size, seed)
        out = obs.graph
        prov = tuple(f"{u}-{v}" for u, v in obs.provenance)
    elif args.mechanism == "snowball-full":
        obs = sampling.snowball_full(g, args.size, seed)
        out, prov = obs.graph, obs.provenance
    elif args.mechanism == "snowball-chain":
        obs = sampling.snowball_chain(g, args.size, seed)
        out, prov = obs.graph, obs.provenance
    elif args.mechanism == "thin":
        out = sampling.thin(g, args.rho, seed)
        prov = tuple(range(1, out.n + 1))
    elif args.mechanism == "path":
        pobs = sampling.path_sample(g, args.size, seed)
        obs = sampling.paths_to_observation(pobs)
        out, prov = obs.graph, obs.provenance
        trailer = "".join(f"# path: {' '.join(map(str, p))}\n" for p in pobs.paths)
    elif args.mechanism == "universal":
        if not args.mu:
            raise ValidationError("universal sampling needs --mu <tablefile>")
        out = sampling.universal_embed(_load_mu_table(args.mu), args.p, seed)
        prov = ()
    else:
        raise ValidationError(f"unknown mechanism {args.mechanism!r}")
    text = graphs.to_text(out)
    if prov:
        text += f"# sampled: {' '.join(map(str, prov))}\n"
    text += trailer
    _write_output(text, args.out)
    return 0


def cmd_stats(args) -> int:
    _echo_config("stats", {"in": args.infile})
    g = graphs.load(args.infile)
    if isinstance(g, graphs.SimpleGraph):
        print(f"vertices={g.n}")
        print(f"edges={g.edge_count}")
        if g.n >= 2:
            print(f"density={stats.edge_density(g):.6f}")
    else:
        print(f"edge_labels={g.m}")
        print(f"vertices={len(g.vertices())}")
    if args.trace:
        if args.sizes:
            sizes = [int(s) for s in args.sizes.split(",")]
        else:
            total = g.n if isinstance(g, graphs.SimpleGraph) else g.m
            sizes = sorted({max(2, total // 4), max(2, total // 2), total})
        trace = stats.sparsity_trace(g, sizes)
        for s, d in zip(trace.sizes, trace.densities):
            print(f"density_{s}={d:.6f}")
    if args.power_law or args.profile:
        profile = graphs.degree_profile(g)
        if args.profile:
            for k, c in profile.counts:
                print(f"N_{k}={c}")
        if args.power_law:
            fit = stats.fit_power_law(profile, k_min=args.kmin)
            print(f"gamma_hat={fit.gamma_hat:.6f}")
            print(f"k_min={fit.k_range[0]}")
            print(f"k_max={fit.k_range[1]}")
            print(f"r2={fit.r2:.6f}")
    return 0


def cmd_estimate(args) -> int:
    _echo_config("estimate", {"estimator": args.estimator, "in": args.infile})
    g = graphs.load(args.infile)
    if args.estimator == "thinned-er":
        report = inference.mle_thinned_er(g, rho=args.rho)
    elif args.estimator == "reparam":
        if args.f not in inference.NAMED_BIJECTIONS:
            raise ValidationError(
                f"unknown bijection {args.f!r}; choose from {sorted(inference.NAMED_BIJECTIONS)}"
            )
        f, f_inv = inference.NAMED_BIJECTIONS[args.f]
        report = inference.estimate_reparam(g, f, f_inv, rho=args.rho)
    elif args.estimator == "sbm-rates":
        if not args.blocks:
            raise ValidationError("sbm-rates needs --blocks")
        report = inference.mle_sbm_rates(g, _partition(args.blocks))
    else:
        raise ValidationError(f"unknown estimator {args.estimator!r}")
    print(f"estimator={report.estimator}")
    print(f"n={report.n}")
    for key, value in report.estimates:
        print(f"{key}={value:.6f}")
    print(f"clipped={int(report.clipped)}")
    return 0


def cmd_predict(args) -> int:
    seed = _resolve_seed(args)
    method = "mc" if args.mc else "exact"
    _echo_config(
        "predict",
        {
            "mechanism": args.mechanism,
            "p": args.p,
            "method": method,
            "observed": args.observed,
            "target": args.target,
            "seed": seed,
        },
    )
    query = predict.PredictiveQuery(
        n_pop=args.npop,
        prior=generators.ER(args.p),
        mechanism=args.mechanism,
        observed=_parse_labeled_edges(args.observed),
        target=_parse_labeled_edges(args.target)[0],
        n=args.size or 0,
        rho=args.rho,
    )
    print(f"mechanism={args.mechanism}")
    if args.mc:
        result = predict.predict_mc(query, args.reps, seed)
        if result.abstained:
            print("abstained=1")
            print(f"hits={result.hits}")
            return 1
        print(f"value={result.estimate:.6f}")
        print(f"se={result.se:.6f}")
        print(f"hits={result.hits}")
        print(f"reps={result.reps}")
    else:
        print(f"value={predict.predict_exact(query):.6f}")
        print("method=exact")
    return 0


# ---------------------------------------------------------------------------
# Named verification suites


def _suite_link_prediction() -> list:
    forms = {
        "vertex": lambda p: p,
        "edge": lambda p: 4 * p / (9 - 5 * p),
        "snowball-chain": lambda p: p / (2 - p),
        "thin": lambda p: 2 * p / (3 - p),
    }
    lines = []
    for mechanism, form in forms.items():
        worst = 0.0
        for k in range(1, 10):
            p = k / 10
            query = predict.PredictiveQuery(
                3, generators.ER(p), mechanism, ((1, 2), (2, 3)), (1, 3)
            )
            worst = max(worst, abs(predict.predict_exact(query) - form(p)))
        lines.append((worst <= 1e-12, f"{mechanism} closed form, max |err| = {worst:.2e}"))
    return lines


def _suite_consistency() -> list:
    from .generators import Beta, ERGM, exact_law, law_restrict, total_variation

    beta = Beta((0.4, -0.3, 0.9))
    tv_beta = total_variation(
        law_restrict(exact_law(beta), 2), exact_law(Beta(beta.beta[:2]))
    )
    ergm3 = ERGM(("edges", "triangles"), (-1.0, 0.5), 3)
    ergm2 = ERGM(("edges", "triangles"), (-1.0, 0.5), 2)
    tv_ergm = total_variation(law_restrict(exact_law(ergm3), 2), exact_law(ergm2))
    return [
        (tv_beta <= 1e-12, f"degree-parameter family consistent at 3->2, tv = {tv_beta:.2e}"),
        (tv_ergm > 1e-3, f"edges+triangles family inconsistent at 3->2, tv = {tv_ergm:.2e}"),
    ]


def _suite_relative_exchangeability() -> list:
    from .generators import SBM, exact_law, law_restrict, pair_kernel_law, sbm_kernel

    lines = []
    worst = 0.0
    for p, q in ((0.8, 0.1), (0.5, 0.5)):
        for part in graphs.all_partitions(3):
            kernel_law = pair_kernel_law((p, q), part, sbm_kernel, 3)
            block_law = exact_law(SBM(p, q, part))
            worst = max(worst, max(abs(kernel_law[g] - block_law[g]) for g in block_law))
    lines.append((worst <= 1e-12, f"kernel law matches blockmodel law, max gap = {worst:.2e}"))
    worst = 0.0
    parts4 = graphs.all_partitions(4)
    for a in range(len(parts4)):
        for b in range(a + 1, len(parts4)):
            if parts4[a].restrict(3) != parts4[b].restrict(3):
                continue
            la = law_restrict(exact_law(SBM(0.8, 0.1, parts4[a])), 3)
            lb = law_restrict(exact_law(SBM(0.8, 0.1, parts4[b])), 3)
            worst = max(worst, max(abs(la[g] - lb[g]) for g in la))
    lines.append(
        (worst <= 1e-12, f"restricted laws depend only on restricted blocks, max gap = {worst:.2e}")
    )
    return lines


def _suite_identifiability() -> list:
    from itertools import permutations

    from .generators import ER, SBM, exact_law, law_relabel, total_variation

    lines = []
    report = inference.identifiability_check("er")
    lines.append(
        (report.verdict == "completely-identifiable", f"homogeneous family: {report.verdict}")
    )
    report = inference.identifiability_check("sbm")
    lines.append(
        (report.verdict == "not-completely-identifiable", f"blockmodel: {report.verdict}")
    )
    worst = 0.0
    er_law = exact_law(ER(0.3), 3)
    for sigma in permutations(range(1, 4)):
        worst = max(worst, total_variation(law_relabel(er_law, sigma), er_law))
    lines.append((worst <= 1e-12, f"trivial relabeling action, max tv = {worst:.2e}"))
    worst = 0.0
    part = graphs.Partition.from_blocks([(1, 2), (3,)])
    for sigma in permutations(range(1, 4)):
        lhs = law_relabel(exact_law(SBM(0.8, 0.1, part)), sigma)
        rhs = exact_law(SBM(0.8, 0.1, part.relabel(sigma)))
        worst = max(worst, total_variation(lhs, rhs))
    lines.append((worst <= 1e-12, f"blockmodel relabeling action, max tv = {worst:.2e}"))
    return lines


def _suite_martingale() -> list:
    lines = []
    report = stats.density_martingale_check(generators.ER(0.3), (3, 10, 30), 10_000, 0)
    lines.append(
        (report.passed, f"homogeneous 0.3: means {tuple(round(m, 4) for m in report.means)}")
    )
    grid = generators.Graphon(((0.9, 0.1), (0.1, 0.9)))
    report = stats.density_martingale_check(grid, (3, 10, 30), 10_000, 0)
    lines.append(
        (report.passed, f"two-cell graphon: means {tuple(round(m, 4) for m in report.means)}")
    )
    return lines


SUITES = {
    "link-prediction": _suite_link_prediction,
    "consistency": _suite_consistency,
    "relative-exchangeability": _suite_relative_exchangeability,
    "identifiability": _suite_identifiability,
    "martingale": _suite_martingale,
}
SUITE_ALIASES = {"section-6-2": "link-prediction"}


def cmd_verify(args) -> int:
    name = SUITE_ALIASES.get(args.suite, args.suite)
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise ValidationError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES) + ['all']}")
    _echo_config("verify", {"suite": args.suite})
    ok = True
    for suite in names:
        for passed, detail in SUITES[suite]():
            ok &= passed
            print(f"{'PASS' if passed else 'FAIL'} [{suite}] {detail}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netlab",
        description="Random-graph generating models, sampling mechanisms, and sampling-aware inference.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0, help="RNG seed (NETLAB_SEED overrides)")
        p.add_argument("--porcelain", action="store_true", help="key=value output only")

    p = sub.add_parser("generate", help="draw a graph from a model description")
    p.add_argument("--model", required=True, help='e.g. "model=er p=0.5 n=3"')
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sample", help="apply a sampling mechanism to a graph file")
    p.add_argument(
        "--mechanism",
        required=True,
        choices=[
            "canonical",
            "vertex",
            "edge",
            "snowball-full",
            "snowball-chain",
            "thin",
            "path",
            "universal",
        ],
    )
    p.add_argument("--size", type=int, default=1, help="sample size (or draw count)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--rho", type=float, default=2.0, help="inverse retention for thinning")
    p.add_argument("--p", type=float, default=0.5, help="population edge probability (universal)")
    p.add_argument("--mu", default=None, help="target law table file (universal)")
    common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("stats", help="summary statistics of a graph file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--power-law", action="store_true")
    p.add_argument("--kmin", type=int, default=2)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--sizes", default=None, help="comma list of trace sizes")
    p.add_argument("--profile", action="store_true", help="dump degree counts")
    common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("estimate", help="sampling-aware estimators on an observation file")
    p.add_argument("--estimator", required=True, choices=["thinned-er", "reparam", "sbm-rates"])
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--f", default="identity", help="named bijection for reparam")
    p.add_argument("--blocks", default=None, help="block ids, e.g. 1,1,2")
    common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("predict", help="missing-link prediction under a mechanism")
    p.add_argument("--mechanism", required=True, choices=list(predict.MECHANISMS))
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--exact", action="store_true", default=True)
    p.add_argument("--mc", action="store_true")
    p.add_argument("--reps", type=int, default=100_000)
    p.add_argument("--observed", default="1-2,2-3")
    p.add_argument("--target", default="1-3")
    p.add_argument("--npop", type=int, default=3)
    p.add_argument("--size", type=int, default=0, help="sample size / chain length")
    p.add_argument("--rho", type=float, default=3.0)
    common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--suite", required=True)
    common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except NetlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
