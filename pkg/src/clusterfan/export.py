"""JSON documents for exchange graphs, cluster variables and fans."""

from __future__ import annotations

from typing import Any

from .cluster import ExchangeGraph, cluster_variables, key_to_str
from .fan import FanReport, CoverageReport, ProjectedFan
from .poly import render
from .ssyt import Array, array_to_tableau, frozen_arrays

SCHEMA_VERSION = 1


def _vertex(v) -> list[int]:
    return list(v)


def label_record(a: Array) -> dict[str, Any]:
    return {"rows": a.rows(), "tableau": array_to_tableau(a).render()}


def variables_document(g: ExchangeGraph, polynomials: bool = False) -> dict[str, Any]:
    frozen = set(frozen_arrays(g.n))
    out = []
    for var in cluster_variables(g):
        rec = label_record(var.label)
        rec.update(frozen=var.label in frozen, degree=var.poly.degree(), terms=len(var.poly))
        if polynomials:
            rec["polynomial"] = render(var.poly)
        out.append(rec)
    return {"schema": "clusterfan.variables", "version": SCHEMA_VERSION, "n": g.n, "variables": out}


def graph_document(g: ExchangeGraph, polynomials: bool = False) -> dict[str, Any]:
    """Seeds as lists of variable ids (mutable part in vertex order) plus the mutation edges."""
    variables = variables_document(g, polynomials)["variables"]
    ids = {tuple(map(tuple, v["rows"])): k for k, v in enumerate(variables)}

    def vid(a: Array) -> int:
        return ids[tuple(map(tuple, a.rows()))]

    seed_ids = {key: k for k, key in enumerate(g.seeds)}
    seeds = []
    for key, seed in g.seeds.items():
        seeds.append({
            "id": seed_ids[key],
            "key": key_to_str(key),
            "depth": g.depth[key],
            "vertices": [_vertex(v) for v in seed.quiver.mutable],
            "variables": [vid(a) for a in seed.mutable_labels()],
        })
    edges = []
    for src, v, dst, old, new in g.edges:
        if dst not in seed_ids:
            continue
        edges.append({"source": seed_ids[src], "target": seed_ids[dst], "vertex": _vertex(v),
                      "old": vid(old), "new": vid(new)})
    return {
        "schema": "clusterfan.exchange-graph",
        "version": SCHEMA_VERSION,
        "n": g.n,
        "stats": g.stats(),
        "frozen": [vid(a) for a in frozen_arrays(g.n)],
        "variables": variables,
        "seeds": seeds,
        "edges": edges,
    }


def fan_document(g: ExchangeGraph, projected: ProjectedFan | None = None,
                 report: FanReport | None = None, cover: CoverageReport | None = None) -> dict[str, Any]:
    """Deduplicated ray table and cones as index lists into it.

    The frozen arrays come first in the ray table, and every cone lists its
    mutable rays followed by the frozen ones.
    """
    frozen = frozen_arrays(g.n)
    rays: list[Array] = list(frozen)
    index = {a: k for k, a in enumerate(rays)}
    cones = []
    for seed in g.seeds.values():
        ids = []
        for a in seed.mutable_labels():
            if a not in index:
                index[a] = len(rays)
                rays.append(a)
            ids.append(index[a])
        cones.append(ids + list(range(len(frozen))))
    ray_records = []
    for a in rays:
        rec = label_record(a)
        rec["vector"] = list(a.entries)
        rec["frozen"] = index[a] < len(frozen)
        if projected is not None:
            rec["projected"] = list(projected.project(a))
        ray_records.append(rec)
    doc: dict[str, Any] = {
        "schema": "clusterfan.fan",
        "version": SCHEMA_VERSION,
        "n": g.n,
        "dimension": len(frozen[0].entries),
        "rays": ray_records,
        "cones": cones,
    }
    if projected is not None:
        doc["projection"] = {
            "basis": [label_record(a) for a in projected.basis],
            "matrix": projected.projection,
            "cones": [[index[a] for a in c] for c in projected.cones],
        }
    if report is not None:
        doc["verification"] = report.to_json()
    if cover is not None:
        doc["coverage"] = cover.to_json()
    return doc
