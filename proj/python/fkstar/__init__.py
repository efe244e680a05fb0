"""Continuum random-cluster sampling on star-like graphs."""

from pathlib import Path

from ._fkstar import (
    Estimate,
    FiniteGraph,
    FkstarError,
    StarLikeGraph,
    __version__,
    dual_parameters,
    duality_check,
    estimate_box_reach,
    estimate_theta,
    finite_beta_connection,
    finite_beta_correlation,
    finite_graph,
    ground_state_correlation,
    scan_critical,
    spectral_gap,
    star_like_graph,
    truncate,
)


def load_graph(path):
    """Read a graph JSON file; finite if it has no rays, star-like otherwise."""
    import json

    text = Path(path).read_text()
    if json.loads(text).get("rays"):
        return star_like_graph(text)
    return finite_graph(text)


def star(k):
    """The star with k rays; star(2) is Z."""
    import json

    rays = [{"id": f"r{i + 1}", "attach": "O"} for i in range(k)]
    return star_like_graph(json.dumps({"core_vertices": ["O"], "core_edges": [], "rays": rays, "origin": "O"}))
