"""The operation layer behind the service endpoints.

The CLI calls these functions directly (in-process); the FastAPI app exposes
them over HTTP.  Both paths therefore produce identical reports, and every
report echoes its configuration, guards, and seed so seeded runs are
byte-reproducible once the timestamp is suppressed.
"""

from __future__ import annotations

from dataclasses import asdict
from datetime import datetime, timezone
from multiprocessing import get_context
from typing import Any

from .. import __version__
from ..auxgraph import (
    build_subset_graph,
    build_tuple_graph,
    check_subset_intersection_bound,
    check_tuple_intersection_bound,
    count_krr,
    count_mono_matchings,
    find_blowup_cycle,
    find_colour_isomorphic_cycles,
    hypercube_coloured,
)
from ..conflict import (
    check_key_lemma,
    dyadic_profile,
    equality_relation,
    same_colour_relation,
    sweep_chunk,
    verify_sparsity,
)
from ..extract import (
    almost_regular_subgraph,
    bipartite_step1,
    bipartite_step2,
    blowup_biregular,
)
from ..graphs import (
    BipartitePartition,
    complete_graph,
    greedy_proper_colouring,
    load_coloured_graph,
    load_document,
    load_graph,
    random_graph,
    serialize_coloured_graph,
    serialize_graph,
    validate_proper,
)
from ..homcount import (
    check_bipartite_mindeg,
    check_interpolation,
    check_ratio_monotonicity,
    check_sidorenko,
)
from ..search import (
    CycleWitness,
    ThetaWitness,
    find_good_2k_cycle,
    find_rainbow_2k_cycle,
    find_rainbow_even_cycle,
    find_rainbow_theta,
)
from ..smallgraphs import all_graphs
from .models import (
    GenRequest,
    GenResponse,
    Meta,
    SearchRequest,
    SearchResponse,
    SweepRequest,
    SweepResponse,
    VerifyRequest,
    VerifyResponse,
)

SWEEP_COLUMNS = ["instance-id", "n", "e", "k", "bad-count", "bound", "margin", "pass"]


def _meta(command: str, request, guards: dict[str, Any], seed: int | None) -> Meta:
    config = request.model_dump(exclude={"document"})
    if getattr(request, "document", None) is not None:
        config["document_lines"] = len(request.document.splitlines())
    return Meta(
        tool="cyclekit",
        version=__version__,
        command=command,
        config=config,
        guards=guards,
        seed=seed,
        timestamp=None
        if request.no_timestamp
        else datetime.now(timezone.utc).isoformat(),
    )


def _need(value, name: str):
    if value is None:
        raise ValueError(f"missing required parameter --{name}")
    return value


def run_gen(request: GenRequest) -> GenResponse:
    kind = request.kind
    if kind == "random":
        g = random_graph(_need(request.n, "n"), _need(request.p, "p"), request.seed)
        document = serialize_graph(g)
        stats = {"n": g.n, "edges": g.edge_count}
    elif kind == "hypercube":
        g, c = hypercube_coloured(_need(request.m, "m"))
        document = serialize_coloured_graph(g, c)
        stats = {"n": g.n, "edges": g.edge_count, "colours": c.palette_size}
    elif kind == "complete-greedy":
        g = complete_graph(_need(request.n, "n"))
        c = greedy_proper_colouring(g, request.seed)
        document = serialize_coloured_graph(g, c)
        stats = {"n": g.n, "edges": g.edge_count, "colours": c.palette_size}
    elif kind == "subset-aux":
        g = load_graph(_need(request.document, "in"))
        aux = build_subset_graph(g, _need(request.r, "r"))
        labels = "".join(
            f"# vertex {i} = {','.join(map(str, lab))}\n"
            for i, lab in enumerate(aux.labels)
        )
        document = labels + serialize_graph(aux.graph)
        stats = {"n": aux.graph.n, "edges": aux.graph.edge_count, "base_n": g.n}
    elif kind == "tuple-aux":
        g, c = load_coloured_graph(_need(request.document, "in"))
        aux = build_tuple_graph(c, _need(request.r, "r"))
        labels = "".join(
            f"# vertex {i} = {','.join(map(str, lab))}\n"
            for i, lab in enumerate(aux.labels)
        )
        document = labels + serialize_graph(aux.graph)
        stats = {"n": aux.graph.n, "edges": aux.graph.edge_count, "base_n": g.n}
    else:  # pragma: no cover - pydantic rejects other kinds
        raise ValueError(f"unknown generator {kind!r}")
    meta = _meta(f"gen {kind}", request, guards={}, seed=request.seed)
    return GenResponse(meta=meta, document=document, stats=stats)


def _relation_for(request: VerifyRequest, g, colouring):
    if request.relation == "equality":
        return equality_relation()
    if colouring is None:
        raise ValueError("the same-colour relation needs a coloured document")
    return same_colour_relation(colouring)


def run_verify(request: VerifyRequest) -> VerifyResponse:
    g, colouring = load_document(request.document)
    check = request.check
    details: dict[str, Any]
    if check == "proper":
        if colouring is None:
            raise ValueError("properness check needs a coloured document")
        violations = validate_proper(g, colouring)
        passed = not violations
        details = {
            "violations": [asdict(v) for v in violations[:100]],
            "colours": colouring.palette_size,
        }
    elif check == "ratio":
        cert = check_ratio_monotonicity(g, request.kmax)
        passed, details = cert.passed, dict(cert.details)
    elif check == "interpolation":
        cert = check_interpolation(g, request.k, request.ell)
        passed, details = cert.passed, dict(cert.details)
    elif check == "sidorenko":
        cert = check_sidorenko(g, request.k)
        passed, details = cert.passed, dict(cert.details)
    elif check == "bipartite-mindeg":
        sides = g.bipartition()
        if sides is None:
            raise ValueError("graph is not bipartite")
        cert = check_bipartite_mindeg(
            g, BipartitePartition.of(sides[0], sides[1]), request.k
        )
        passed, details = cert.passed, dict(cert.details)
    elif check == "sparsity":
        rel = _relation_for(request, g, colouring)
        cert = verify_sparsity(g, rel)
        passed = cert.passed
        details = asdict(cert)
    elif check == "key-lemma":
        rel = _relation_for(request, g, colouring)
        cert = check_key_lemma(g, request.k, rel, budget=request.budget)
        passed = cert.passed
        details = {
            "count": cert.count,
            "bound": cert.bound,
            "relation": cert.relation,
            "k": cert.k,
            "sparsity": asdict(cert.sparsity),
            "total": cert.total,
            "good": cert.good,
        }
    elif check == "dyadic":
        prof = dyadic_profile(g, request.k)
        passed = prof.alpha_bound_ok and prof.beta_bound_ok
        details = {
            "alpha": {str(r): v for r, v in prof.alpha.items()},
            "beta": {str(r): v for r, v in prof.beta.items()},
            "q": prof.q,
            "hom_short": prof.hom_short,
            "hom_long": prof.hom_long,
        }
    elif check == "tuple-bound":
        if colouring is None:
            raise ValueError("tuple graph needs a coloured document")
        aux = build_tuple_graph(colouring, request.r)
        cert = check_tuple_intersection_bound(aux, seed=request.seed)
        passed, details = cert.passed, dict(cert.details)
    elif check == "subset-bound":
        aux = build_subset_graph(g, request.r)
        cert = check_subset_intersection_bound(aux, seed=request.seed)
        passed, details = cert.passed, dict(cert.details)
        details["violation"] = list(details["violation"] or []) or None
    elif check == "krr-count":
        passed = True
        details = {"r": request.r, "count": count_krr(g, request.r)}
    elif check == "mono-matchings":
        if colouring is None:
            raise ValueError("matching count needs a coloured document")
        passed = True
        details = {"r": request.r, "count": count_mono_matchings(colouring, request.r)}
    elif check == "step1":
        report = bipartite_step1(g)
        passed = report.passed
        details = {
            "achieved": report.achieved,
            "target": report.target,
            "branch": report.branch,
        }
    elif check == "step2":
        report = bipartite_step2(g)
        passed = report.passed
        details = {
            "achieved": report.achieved,
            "target": report.target,
            "branch": report.branch,
        }
    elif check == "almost-regular":
        report = almost_regular_subgraph(g, request.eps, request.c)
        passed = report.passed
        details = {
            "achieved": report.achieved,
            "target": report.target,
            "branch": report.branch,
        }
    elif check == "blowup-biregular":
        base_n = request.base_n if request.base_n is not None else g.n
        report = blowup_biregular(g, base_n, request.r, seed=request.seed)
        passed = report.passed
        details = {
            "achieved": report.achieved,
            "target": report.target,
            "branch": report.branch,
        }
    else:  # pragma: no cover
        raise ValueError(f"unknown check {check!r}")
    meta = _meta(
        f"verify {check}",
        request,
        guards={"budget": request.budget},
        seed=request.seed,
    )
    return VerifyResponse(meta=meta, passed=passed, details=details)


def _witness_dict(witness) -> dict[str, Any] | None:
    if witness is None:
        return None
    if isinstance(witness, CycleWitness):
        return {"type": "cycle", "vertices": list(witness.vertices)}
    if isinstance(witness, ThetaWitness):
        return {
            "type": "theta",
            "a": witness.a,
            "b": witness.b,
            "paths": [list(p) for p in witness.paths],
        }
    from ..auxgraph import BlowupWitness, ColourIsoWitness

    if isinstance(witness, BlowupWitness):
        return {"type": "blowup", "classes": [list(c) for c in witness.classes]}
    if isinstance(witness, ColourIsoWitness):
        return {
            "type": "colour-iso",
            "copies": [list(c) for c in witness.copies],
            "colours": list(witness.colours),
        }
    raise TypeError(f"unknown witness type {type(witness)!r}")  # pragma: no cover


def run_search(request: SearchRequest) -> SearchResponse:
    g, colouring = load_document(request.document)
    finder = request.finder
    k = request.k if request.k is not None else 2
    if finder == "good-cycle":
        result = find_good_2k_cycle(
            g,
            k,
            budget=request.budget,
            seed=request.seed,
            exact_max_n=request.exact_max_n,
        )
    elif finder == "rainbow-cycle":
        if colouring is None:
            raise ValueError("rainbow search needs a coloured document")
        result = find_rainbow_2k_cycle(
            g,
            colouring,
            k,
            budget=request.budget,
            seed=request.seed,
            exact_max_n=request.exact_max_n,
        )
    elif finder == "theta":
        if colouring is None:
            raise ValueError("theta search needs a coloured document")
        result = find_rainbow_theta(
            g, colouring, k, request.t, budget=request.budget, seed=request.seed
        )
    elif finder == "even-cycle":
        if colouring is None:
            raise ValueError("even-cycle search needs a coloured document")
        result = find_rainbow_even_cycle(
            g,
            colouring,
            budget=request.budget,
            seed=request.seed,
            exact_max_n=request.exact_max_n,
        )
    elif finder == "blowup":
        result = find_blowup_cycle(
            g, request.r, k=request.k, budget=request.budget, seed=request.seed
        )
    elif finder == "colour-iso":
        if colouring is None:
            raise ValueError("colour-isomorphic search needs a coloured document")
        result = find_colour_isomorphic_cycles(
            colouring, request.r, k, budget=request.budget, seed=request.seed
        )
    else:  # pragma: no cover
        raise ValueError(f"unknown finder {finder!r}")
    meta = _meta(
        f"search {finder}",
        request,
        guards={"budget": request.budget, "exact_max_n": request.exact_max_n},
        seed=request.seed,
    )
    details = {"draws": result.draws, "phase": result.phase}
    details.update(result.details)
    return SearchResponse(
        meta=meta,
        status=result.status.value,
        witness=_witness_dict(result.witness),
        details=details,
    )


def run_sweep(request: SweepRequest) -> SweepResponse:
    if request.nmax < 1 or request.nmax > 9:
        raise ValueError("sweep supports 1 <= nmax <= 9")
    items: list[tuple[str, str]] = []
    from ..smallgraphs import graph6_encode

    for n in range(1, request.nmax + 1):
        for idx, g in enumerate(all_graphs(n, connected=request.connected_only)):
            items.append((f"n{n}-i{idx:06d}", graph6_encode(g)))
    if request.max_graphs is not None:
        items = items[: request.max_graphs]
    ks = tuple(request.ks)
    seeds = tuple(request.colour_seeds)
    rows_dicts: list[dict[str, Any]] = []
    if request.processes > 1 and len(items) > 64:
        chunk_count = request.processes * 8
        chunks = [(items[i::chunk_count], ks, seeds) for i in range(chunk_count)]
        with get_context("fork").Pool(request.processes) as pool:
            for part in pool.imap_unordered(sweep_chunk, chunks):
                rows_dicts.extend(part)
    else:
        rows_dicts = sweep_chunk((items, ks, seeds))
    rows_dicts.sort(key=lambda r: r["instance-id"])
    rows = [[r[c] for c in SWEEP_COLUMNS] for r in rows_dicts]
    meta = _meta(
        "sweep keylemma",
        request,
        guards={"nmax": request.nmax},
        seed=None,
    )
    return SweepResponse(
        meta=meta,
        columns=list(SWEEP_COLUMNS),
        rows=rows,
        all_passed=all(r["pass"] for r in rows_dicts),
    )
