"""Edge shifts on finite windows, and the sliding-block code induced by a witness.

A witness A_E = RS splits every E-edge e into an R-edge followed by an S-edge,
e <-> (rho, sigma).  Regrouping the bi-infinite sequence rho_0 sigma_0 rho_1
sigma_1 ... as (sigma_i, rho_{i+1}) gives F-edges, so the code has memory 0
and anticipation 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bipartite import BijectionError, BipartiteInflation, PathBijection
from .graph import Graph, is_composable, is_regular_graph, paths_of_length, vertex_matrix
from .matrix import power
from .report import Report

Word = tuple[str, ...]

# windows with more allowed words than this are checked through their 3-blocks
EXHAUSTIVE_WORD_LIMIT = 50_000


def allowed_words(g: Graph, n: int) -> list[Word]:
    """All composable edge words of length ``n``, sorted by edge id."""
    return paths_of_length(g, n)


def count_allowed_words(g: Graph, n: int) -> int:
    return power(vertex_matrix(g), n).total() if g.vertices else 0


def periodic_word_count(g: Graph, k: int) -> int:
    """Number of closed edge paths of length ``k`` (points of period k in the edge shift)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    total = 0
    for start in g.vertices:
        ways = {start: 1}
        for _ in range(k):
            nxt: dict[str, int] = {}
            for v, count in ways.items():
                for e in g.out_edges(v):
                    nxt[e.rng] = nxt.get(e.rng, 0) + count
            ways = nxt
        total += ways.get(start, 0)
    return total


@dataclass(frozen=True)
class BlockCode:
    """Sliding-block code with memory 0 and anticipation 1."""

    source: Graph
    target: Graph
    rule: dict

    def __call__(self, word: Sequence[str]) -> Word:
        return apply_code(self, word)


def composable_pairs(g: Graph) -> list[tuple[str, str]]:
    return [(e.id, f.id) for e in g.sorted_edges() for f in g.out_edges(e.rng)]


def conjugacy_code(e: Graph, f: Graph, g: BipartiteInflation,
                   be: PathBijection, bf: PathBijection) -> BlockCode:
    split_f = bf.inverse()
    rule = {}
    for e1, e2 in composable_pairs(e):
        try:
            _, sigma = be[e1]
            rho_next, _ = be[e2]
        except KeyError as exc:
            raise BijectionError(f"E-edge {exc.args[0]!r} missing from the E bijection") from None
        image = split_f.get((sigma, rho_next))
        if image is None:
            raise BijectionError(f"no F-edge corresponds to the path {sigma} {rho_next}")
        rule[e1, e2] = image
    return BlockCode(e, f, rule)


def apply_code(code: BlockCode, word: Sequence[str]) -> Word:
    word = tuple(word)
    if len(word) < 2:
        raise ValueError("block code input needs at least 2 letters")
    if not is_composable(code.source, word):
        raise ValueError(f"word {word} is not composable in the source graph")
    return tuple(code.rule[p] for p in zip(word, word[1:]))


def verify_conjugacy_window(code: BlockCode, l: int) -> Report:
    """Check the code on all allowed words of length ``l``.

    Exhaustive when the window holds at most ``EXHAUSTIVE_WORD_LIMIT`` words.
    Otherwise the length-l checks are decided on length-3 words: an output
    pair depends only on an input 3-block, and in a graph without sinks every
    allowed 3-block starts some allowed l-word.
    """
    if l < 3:
        raise ValueError("window length must be at least 3")
    src, tgt = code.source, code.target
    rep = Report(f"conjugacy-window l={l}")

    pairs = set(composable_pairs(src))
    keys = set(code.rule)
    rep.add("rule total on composable pairs", keys == pairs,
            f"{len(pairs - keys)} missing, {len(keys - pairs)} extra" if keys != pairs else "")
    unknown = sorted({f for f in code.rule.values() if not tgt.has_edge(f)})
    rep.add("rule images are target edges", not unknown, ", ".join(unknown))
    if keys != pairs or unknown:
        return rep

    count = count_allowed_words(src, l)
    if count <= EXHAUSTIVE_WORD_LIMIT or not is_regular_graph(src):
        words, method = allowed_words(src, l), "exhaustive"
    else:
        words, method = allowed_words(src, 3), "3-blocks"
    rep.data["method"] = method
    rep.data["source_words"] = count

    bad_image = None
    bad_shift = None
    for w in words:
        image = tuple(code.rule[p] for p in zip(w, w[1:]))
        if bad_image is None and not is_composable(tgt, image):
            bad_image = (w, image)
        if bad_shift is None and tuple(code.rule[p] for p in zip(w[1:], w[2:])) != image[1:]:
            bad_shift = w
        if bad_image and bad_shift:
            break
    rep.add("images are allowed target words", bad_image is None,
            f"{method}, {len(words)} words" if bad_image is None
            else f"{' '.join(bad_image[0])} -> {' '.join(bad_image[1])}")
    rep.add("commutes with the shift", bad_shift is None,
            f"{method}" if bad_shift is None else " ".join(bad_shift))

    for k in range(1, l):
        ps, pt = periodic_word_count(src, k), periodic_word_count(tgt, k)
        rep.add(f"period-{k} points", ps == pt, f"{ps} = {pt}" if ps == pt else f"{ps} != {pt}")
    return rep
