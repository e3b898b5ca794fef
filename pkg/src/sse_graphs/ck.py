"""Formal Cuntz-Krieger algebra of a finite graph.

Elements are integer combinations of words in the generators P_v, S_e, S*_e.
The empty word is the unit.  :func:`normal_form` applies the product rules

    P_v P_w -> d(v,w) P_v          S*_e S_f -> d(e,f) P_r(e)
    P_v S_e -> d(v,s(e)) S_e       S_e P_v -> d(r(e),v) S_e
    P_v S*_e -> d(v,r(e)) S*_e     S*_e P_v -> d(s(e),v) S*_e

together with their consequences for adjacent partial isometries (S_e S_f = 0
unless r(e) = s(f), and so on).  Every surviving word is P_v or S_mu S*_nu with
mu, nu paths ending at the same vertex.  The sum relation at a vertex is used
only as a left-to-right expansion, inside :func:`check_equal`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping

from .bipartite import BipartiteInflation, PathBijection, check_path_bijection
from .graph import Graph, hereditary_closure, is_regular_graph, saturated_hereditary_closure
from .report import Report

P, S, SSTAR = "P", "S", "S*"
_KIND_RANK = {P: 0, S: 1, SSTAR: 2}

Symbol = tuple[str, str]
CKWord = tuple[Symbol, ...]


class CKError(ValueError):
    pass


def _word_key(word: CKWord):
    return (len(word), tuple((_KIND_RANK[k], name) for k, name in word))


def _star_symbol(sym: Symbol) -> Symbol:
    kind, name = sym
    if kind == S:
        return (SSTAR, name)
    if kind == SSTAR:
        return (S, name)
    return sym


def _star_word(word: CKWord) -> CKWord:
    return tuple(_star_symbol(s) for s in reversed(word))


class CKElement:
    """Finite integer combination of generator words; the empty word is 1."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[CKWord, int] | Iterable[tuple[CKWord, int]] = ()):
        acc: dict[CKWord, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for word, c in items:
            word = tuple(tuple(s) for s in word)
            acc[word] = acc.get(word, 0) + c
        self.terms = {w: c for w, c in sorted(acc.items(), key=lambda t: _word_key(t[0])) if c}

    @classmethod
    def zero(cls) -> "CKElement":
        return cls()

    @classmethod
    def one(cls) -> "CKElement":
        return cls({(): 1})

    def __eq__(self, other):
        # syntactic equality; use check_equal for equality in the algebra
        return isinstance(other, CKElement) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "CKElement") -> "CKElement":
        return CKElement(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "CKElement":
        return CKElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "CKElement") -> "CKElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CKElement({w: c * other for w, c in self.terms.items()})
        return CKElement([(w1 + w2, c1 * c2)
                          for w1, c1 in self.terms.items() for w2, c2 in other.terms.items()])

    __rmul__ = __mul__

    def star(self) -> "CKElement":
        return CKElement({_star_word(w): c for w, c in self.terms.items()})

    @property
    def unit_coefficient(self) -> int:
        return self.terms.get((), 0)

    def __repr__(self):
        return f"CKElement({format_element(self)})"


def gen_p(v: str) -> CKElement:
    return CKElement({((P, v),): 1})


def gen_s(e: str) -> CKElement:
    return CKElement({((S, e),): 1})


def gen_sstar(e: str) -> CKElement:
    return CKElement({((SSTAR, e),): 1})


def element_sum(xs: Iterable[CKElement]) -> CKElement:
    terms = []
    for x in xs:
        terms.extend(x.terms.items())
    return CKElement(terms)


def format_word(word: CKWord) -> str:
    if not word:
        return "1"
    return " ".join(f"{k}_{name}" for k, name in word)


def format_element(x: CKElement) -> str:
    if not x.terms:
        return "0"
    parts = []
    for w, c in x.terms.items():
        body = format_word(w)
        parts.append(body if c == 1 else f"-{body}" if c == -1 else f"{c}*{body}")
    return " + ".join(parts).replace("+ -", "- ")


# -- rewriting -------------------------------------------------------------


def _validate(word: CKWord, g: Graph) -> None:
    for kind, name in word:
        if kind == P:
            if not g.has_vertex(name):
                raise CKError(f"unknown vertex {name!r}")
        elif kind in (S, SSTAR):
            if not g.has_edge(name):
                raise CKError(f"unknown edge {name!r}")
        else:
            raise CKError(f"unknown generator kind {kind!r}")


def reduce_word(word: CKWord, g: Graph) -> tuple[CKWord | None, int]:
    """Normal form of a single word: (word, steps) or (None, steps) if it is zero."""
    _validate(word, g)
    stack: list[Symbol] = []
    steps = 0
    for sym in word:
        cur = sym
        while True:
            if not stack:
                stack.append(cur)
                break
            top = stack[-1]
            tk, tn = top
            ck, cn = cur
            steps += 1
            if tk == P:
                if ck == P:
                    if tn != cn:
                        return None, steps
                    break
                if ck == S:
                    if g.source(cn) != tn:
                        return None, steps
                elif g.range(cn) != tn:
                    return None, steps
                stack.pop()
                continue
            if ck == P:
                end = g.range(tn) if tk == S else g.source(tn)
                if end != cn:
                    return None, steps
                break
            if tk == S:
                link = g.source(cn) if ck == S else g.range(cn)
                if g.range(tn) != link:
                    return None, steps
                stack.append(cur)
                break
            # top is S*
            if ck == SSTAR:
                if g.source(tn) != g.range(cn):
                    return None, steps
                stack.append(cur)
                break
            if tn != cn:
                return None, steps
            stack.pop()
            cur = (P, g.range(tn))
    return tuple(stack), steps


def normal_form(x: CKElement, g: Graph) -> CKElement:
    out = []
    for word, c in x.terms.items():
        reduced, steps = reduce_word(word, g)
        assert steps <= 4 * max(len(word), 1) ** 2, "rewriting exceeded its step bound"
        if reduced is not None:
            out.append((reduced, c))
    return CKElement(out)


# -- equality through uniform expansion --------------------------------------


class Verdict(str, enum.Enum):
    EQUAL = "equal"
    NOT_EQUAL_AT_DEPTH = "not-equal-at-depth"


@dataclass(frozen=True)
class EqualityResult:
    verdict: Verdict
    depth: int
    residue: CKElement

    @property
    def equal(self) -> bool:
        return self.verdict is Verdict.EQUAL

    def __bool__(self):
        return self.equal


def unit_as_projections(g: Graph) -> CKElement:
    return element_sum(gen_p(v) for v in g.vertices)


def _middle_vertex(word: CKWord, g: Graph) -> str:
    kind, name = word[0]
    if kind == P:
        return name
    legs = [sym for sym in word if sym[0] == S]
    if legs:
        return g.range(legs[-1][1])
    return g.range(name)


def _left_leg(word: CKWord) -> int:
    return sum(1 for kind, _ in word if kind == S)


def expand(x: CKElement, g: Graph, depth: int) -> CKElement:
    """Rewrite normal-form words with P_v = sum_{s(e)=v} S_e S*_e until every left leg has length >= depth."""
    done = []
    todo = list(x.terms.items())
    while todo:
        word, c = todo.pop()
        if _left_leg(word) >= depth:
            done.append((word, c))
            continue
        v = _middle_vertex(word, g)
        if word[0][0] == P:
            mu, nu = (), ()
        else:
            split = _left_leg(word)
            mu, nu = word[:split], word[split:]
        for e in g.out_edges(v):
            todo.append((mu + ((S, e.id), (SSTAR, e.id)) + nu, c))
    return CKElement(done)


def check_equal(x: CKElement, y: CKElement, g: Graph, depth: int = 2) -> EqualityResult:
    """EQUAL is a proof of x = y.  NOT_EQUAL_AT_DEPTH only means no proof at this depth."""
    if not is_regular_graph(g):
        raise CKError("check_equal needs a regular graph")
    diff = normal_form(x - y, g)
    if not diff:
        return EqualityResult(Verdict.EQUAL, depth, diff)
    unit = diff.unit_coefficient
    if unit:
        rest = CKElement({w: c for w, c in diff.terms.items() if w})
        diff = rest + unit_as_projections(g) * unit
    residue = expand(diff, g, depth)
    verdict = Verdict.EQUAL if not residue else Verdict.NOT_EQUAL_AT_DEPTH
    return EqualityResult(verdict, depth, residue)


# -- embedding a graph algebra into C*(G_{R,S}) ------------------------------


@dataclass(frozen=True)
class EmbeddingMap:
    source: Graph
    vertex_rule: dict
    edge_rule: dict


def embedding_map(source: Graph, bij: PathBijection) -> EmbeddingMap:
    """p_v -> P_v and s_e -> S_first S_second, where e corresponds to the path (first, second)."""
    vertex_rule = {v: gen_p(v) for v in source.vertices}
    edge_rule = {}
    for e in source.edges:
        first, second = bij[e.id]
        edge_rule[e.id] = gen_s(first) * gen_s(second)
    return EmbeddingMap(source, vertex_rule, edge_rule)


def embed(x: CKElement, m: EmbeddingMap) -> CKElement:
    out = []
    for word, c in x.terms.items():
        image = CKElement.one() * c
        for kind, name in word:
            if kind == P:
                if name not in m.vertex_rule:
                    raise CKError(f"p_{name} is not a generator of the source graph")
                factor = m.vertex_rule[name]
            elif kind in (S, SSTAR):
                if name not in m.edge_rule:
                    raise CKError(f"s_{name} is not a generator of the source graph")
                factor = m.edge_rule[name] if kind == S else m.edge_rule[name].star()
            else:
                raise CKError(f"unknown generator kind {kind!r}")
            image = image * factor
        out.extend(image.terms.items())
    return CKElement(out)


LIMITATION = ("relation preservation, complementarity, corner absorption and fullness are "
              "checked symbolically; injectivity of the embeddings is not")


def generator_images(m: EmbeddingMap) -> list[CKElement]:
    src = m.source
    return ([m.vertex_rule[v] for v in src.vertices]
            + [m.edge_rule[e.id] for e in src.sorted_edges()])


def check_relations(m: EmbeddingMap, g: Graph, depth: int = 2, label: str = "E") -> Report:
    """Do the images of the source generators satisfy the Cuntz-Krieger relations in ``g``?"""
    rep = Report(f"relations {label}")
    src = m.source
    img_p = {v: m.vertex_rule[v] for v in src.vertices}
    img_s = {e.id: m.edge_rule[e.id] for e in src.sorted_edges()}

    bad = [f"p_{v} p_{w}" for v, pv in img_p.items() for w, pw in img_p.items()
           if not check_equal(pv * pw, pv if v == w else CKElement.zero(), g, depth)]
    rep.add(f"{label}: vertex projections are orthogonal idempotents", not bad, ", ".join(bad))

    for e in src.sorted_edges():
        se = img_s[e.id]
        res = check_equal(se.star() * se, img_p[e.rng], g, depth)
        rep.add(f"{label} (1): s_{e.id}* s_{e.id} = p_{e.rng}", res.equal, res.verdict.value)
    for e in src.sorted_edges():
        se = img_s[e.id]
        q = se * se.star()
        res = check_equal(img_p[e.src] * q, q, g, depth)
        rep.add(f"{label} (2): s_{e.id} s_{e.id}* <= p_{e.src}", res.equal, res.verdict.value)
    for v in src.vertices:
        out = src.out_edges(v)
        if not out:
            continue
        rhs = element_sum(img_s[e.id] * img_s[e.id].star() for e in out)
        res = check_equal(img_p[v], rhs, g, depth)
        rep.add(f"{label} (3): p_{v} = sum of s_e s_e* over {len(out)} edges", res.equal,
                res.verdict.value)

    # distinct range projections under one vertex; across vertices this follows from (2)
    bad = []
    for v in src.vertices:
        out = src.out_edges(v)
        for e in out:
            for f in out:
                if e.id != f.id and not check_equal(img_s[e.id].star() * img_s[f.id],
                                                    CKElement.zero(), g, depth):
                    bad.append(f"{e.id},{f.id}")
    rep.add(f"{label}: s_e* s_f = 0 for distinct edges with a common source", not bad,
            ", ".join(bad[:5]))
    return rep


def certify_corner_embedding(e: Graph, f: Graph, g: BipartiteInflation,
                             be: PathBijection, bf: PathBijection, depth: int = 2) -> Report:
    rep = Report("corner-embedding certificate")
    rep.notes.append(LIMITATION)
    G = g.graph
    bij_e = check_path_bijection(g, e, be)
    bij_f = check_path_bijection(g, f, bf)
    rep.extend(bij_e, "E bijection: ")
    rep.extend(bij_f, "F bijection: ")
    if not (bij_e.ok and bij_f.ok):
        return rep
    if not is_regular_graph(G):
        rep.add("G_RS regular", False)
        return rep

    me, mf = embedding_map(e, be), embedding_map(f, bf)
    rep.extend(check_relations(me, G, depth, "E"))
    rep.extend(check_relations(mf, G, depth, "F"))
    images_e, images_f = generator_images(me), generator_images(mf)

    proj_p = element_sum(gen_p(v) for v in g.e_vertices)
    proj_q = element_sum(gen_p(v) for v in g.f_vertices)
    res = check_equal(proj_p + proj_q, CKElement.one(), G, depth)
    rep.add("P + Q = 1", res.equal, res.verdict.value)
    res = check_equal(proj_p * proj_q, CKElement.zero(), G, depth)
    rep.add("P Q = 0", res.equal, res.verdict.value)

    for label, proj, images in (("P", proj_p, images_e), ("Q", proj_q, images_f)):
        bad = [format_element(x) for x in images
               if not check_equal(proj * x * proj, x, G, depth)]
        rep.add(f"{label} x {label} = x for all {len(images)} generator images", not bad,
                "; ".join(bad[:3]))

    # fullness: the ideal generated by P (resp. Q) is everything iff the saturated
    # hereditary closure of its vertices is all of G^0
    everything = frozenset(G.vertices)
    for label, start in (("E", g.e_vertices), ("F", g.f_vertices)):
        plain = hereditary_closure(G, start)
        closure = saturated_hereditary_closure(G, start)
        rep.data[f"hereditary_closure_{label}"] = sorted(plain)
        rep.add(f"{label}^0 generates all {len(everything)} vertices (hereditary + saturated)",
                closure == everything,
                f"hereditary closure {len(plain)}, saturated {len(closure)}")
    return rep
