"""RST constituent trees: bracket I/O and well-formedness checks.

Bracket grammar (whitespace-separated, labels contain no whitespace, ``(``,
``)`` or ``=``)::

    tree     := internal | leaf
    internal := "(" "rel=" LABEL? " nuc=" NUC (" " tree)+ ")"
    leaf     := "(" "edu " INT [" rel=" LABEL? " nuc=" NUC] ")"
    NUC      := "N" | "S" | "R"

Every node carries its role in its parent: ``nuc`` is N(ucleus), S(atellite)
or R(oot), ``rel`` the relation to the parent. The nucleus of a mononuclear
relation carries the pseudo relation ``span``; the nuclei of a multinuclear
relation all carry that relation. The root carries ``nuc=R`` and an empty
relation. A bare ``(edu <id>)`` is shorthand for a single-EDU root.
"""

from __future__ import annotations

import re
from typing import Dict, Iterable, List, Optional, Sequence

from .model import EDU, RSTNode
from .validation import Violation

NUC_CODES = {"nucleus": "N", "satellite": "S", "root": "R"}
NUC_NAMES = {v: k for k, v in NUC_CODES.items()}

SPAN = "span"

# relation -> arity class (mononuclear or multinuclear)
RELATIONS: Dict[str, str] = {
    "antithesis": "mono", "attribution": "mono", "background": "mono",
    "cause": "mono", "circumstance": "mono", "concession": "mono",
    "condition": "mono", "elaboration": "mono", "evaluation": "mono",
    "evidence": "mono", "justify": "mono", "manner": "mono",
    "means": "mono", "motivation": "mono", "preparation": "mono",
    "purpose": "mono", "restatement": "mono", "result": "mono",
    "solutionhood": "mono",
    "contrast": "multi", "joint": "multi", "list": "multi",
    "same-unit": "multi", "sequence": "multi",
}

_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")
_LABEL_RE = re.compile(r"^[^\s()=]*$")


class RSTFormatError(ValueError):
    pass


def format_tree(node: RSTNode) -> str:
    """Serialize a tree to a single line in the bracket format."""
    return " ".join(_format_tokens(node))


def _format_tokens(node: RSTNode) -> Iterable[str]:
    if not _LABEL_RE.match(node.relation):
        raise RSTFormatError(f"relation label not serializable: {node.relation!r}")
    nuc = NUC_CODES.get(node.nuclearity)
    if nuc is None:
        raise RSTFormatError(f"unknown nuclearity {node.nuclearity!r}")
    attrs = f"rel={node.relation} nuc={nuc}"
    if node.is_leaf():
        if node.first_edu != node.last_edu:
            raise RSTFormatError(f"leaf spans several EDUs: {node.span}")
        yield f"(edu {node.first_edu} {attrs})"
        return
    yield f"({attrs}"
    for child in node.children:
        yield from _format_tokens(child)
    yield ")"


def parse_tree(text: str) -> RSTNode:
    tokens = _TOKEN_RE.findall(text)
    if not tokens:
        raise RSTFormatError("empty tree")
    node, pos = _parse(tokens, 0)
    if pos != len(tokens):
        raise RSTFormatError(f"trailing material after tree: {' '.join(tokens[pos:pos + 5])}")
    return node


def _parse_attrs(tokens: List[str], pos: int):
    rel, nuc = None, None
    while pos < len(tokens) and tokens[pos] not in ("(", ")"):
        key, sep, value = tokens[pos].partition("=")
        if not sep:
            raise RSTFormatError(f"expected key=value, got {tokens[pos]!r}")
        if key == "rel":
            rel = value
        elif key == "nuc":
            if value not in NUC_NAMES:
                raise RSTFormatError(f"bad nuclearity code {value!r}")
            nuc = NUC_NAMES[value]
        else:
            raise RSTFormatError(f"unknown attribute {key!r}")
        pos += 1
    return rel, nuc, pos


def _parse(tokens: List[str], pos: int):
    if tokens[pos] != "(":
        raise RSTFormatError(f"expected '(' at token {pos}, got {tokens[pos]!r}")
    pos += 1
    if pos >= len(tokens):
        raise RSTFormatError("unexpected end of input")
    if tokens[pos] == "edu":
        try:
            edu_id = int(tokens[pos + 1])
        except (IndexError, ValueError):
            raise RSTFormatError("leaf without integer EDU id") from None
        rel, nuc, pos = _parse_attrs(tokens, pos + 2)
        if pos >= len(tokens) or tokens[pos] != ")":
            raise RSTFormatError("unterminated leaf")
        if nuc is None:
            nuc, rel = "root", rel or ""
        return RSTNode(edu_id, edu_id, nuc, rel or ""), pos + 1
    rel, nuc, pos = _parse_attrs(tokens, pos)
    if nuc is None:
        raise RSTFormatError("internal node without nuc attribute")
    children = []
    while pos < len(tokens) and tokens[pos] == "(":
        child, pos = _parse(tokens, pos)
        children.append(child)
    if pos >= len(tokens) or tokens[pos] != ")":
        raise RSTFormatError("unterminated internal node")
    if not children:
        raise RSTFormatError("internal node without children")
    node = RSTNode(children[0].first_edu, children[-1].last_edu, nuc, rel or "", children)
    return node, pos + 1


def check_tree(tree: RSTNode, edus: Sequence[EDU],
               relations: Optional[Dict[str, str]] = RELATIONS) -> List[Violation]:
    """All well-formedness violations of ``tree`` against ``edus``.

    Pass ``relations=None`` to skip the relation/nuclearity class check.
    """
    out: List[Violation] = []
    n = len(edus)

    def v(node, rule, msg=""):
        out.append(Violation("rst", f"{node.first_edu}-{node.last_edu}", rule, msg))

    if tree.nuclearity != "root":
        v(tree, "rst.root_nuclearity", f"root marked {tree.nuclearity}")
    if (tree.first_edu, tree.last_edu) != (1, n):
        v(tree, "rst.root_coverage", f"root covers {tree.span}, expected (1, {n})")

    leaves = tree.leaves()
    leaf_spans = [leaf.span for leaf in leaves]
    if leaf_spans != [(e.id, e.id) for e in edus]:
        v(tree, "rst.leaf_bijection",
          f"{len(leaves)} leaves for {n} EDUs" if len(leaves) != n else "leaf order differs from EDUs")

    for node in tree.iter_nodes():
        if node.first_edu > node.last_edu:
            v(node, "rst.span_order")
        if node is not tree and node.nuclearity not in ("nucleus", "satellite"):
            v(node, "rst.nuclearity_missing", f"non-root node marked {node.nuclearity!r}")
        if node.is_leaf():
            continue
        if len(node.children) == 1:
            v(node, "rst.unary")
        expected = node.first_edu
        for child in node.children:
            if child.first_edu > expected:
                v(node, "rst.tiling_gap", f"EDUs {expected}-{child.first_edu - 1} uncovered")
            elif child.first_edu < expected:
                v(node, "rst.tiling_overlap", f"child {child.span} overlaps preceding sibling")
            expected = child.last_edu + 1
        if expected - 1 < node.last_edu:
            v(node, "rst.tiling_gap", f"EDUs {expected}-{node.last_edu} uncovered")
        elif expected - 1 > node.last_edu:
            v(node, "rst.tiling_overlap", f"children extend to {expected - 1}")

        nuclei = [c for c in node.children if c.nuclearity == "nucleus"]
        if not nuclei:
            v(node, "rst.no_nucleus")
            continue
        if len(nuclei) >= 2:
            labels = {c.relation for c in nuclei}
            if len(labels) != 1:
                v(node, "rst.multinuc_relation", f"nuclei carry {sorted(labels)}")
            elif relations is not None and relations.get(labels.pop()) != "multi":
                v(node, "rst.multinuc_relation", "nuclei share a non-multinuclear relation")
        elif relations is not None and nuclei[0].relation != SPAN:
            v(node, "rst.relation_class", f"sole nucleus carries {nuclei[0].relation!r}")
        if relations is not None:
            for c in node.children:
                if c.nuclearity == "satellite" and relations.get(c.relation) != "mono":
                    v(c, "rst.relation_class", f"satellite carries {c.relation!r}")
    return out
