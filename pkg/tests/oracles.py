"""Slow, literal reference implementations used to cross-check the scorers.

Written from the metric definitions without sharing any code with the
package: MUC via explicit link graphs, B-cubed via per-mention set
arithmetic, CEAF by trying every alignment.
"""

from itertools import combinations, permutations


def _prf(p_num, p_den, r_num, r_den):
    def ratio(n, d, other):
        if d == 0:
            return 1.0 if other == 0 else 0.0
        return n / d

    p = ratio(p_num, p_den, r_den)
    r = ratio(r_num, r_den, p_den)
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def _components(nodes, edges):
    """Connected components by repeated flood fill."""
    nodes = list(nodes)
    adj = {n: set() for n in nodes}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen, count = set(), 0
    for n in nodes:
        if n in seen:
            continue
        count += 1
        todo = [n]
        while todo:
            x = todo.pop()
            if x in seen:
                continue
            seen.add(x)
            todo.extend(adj[x] - seen)
    return count


def _muc_side(a, b):
    # links kept from chain K = |K| - (components of K once only links also in b survive)
    num = den = 0
    for chain in a:
        chain = list(chain)
        edges = [(x, y) for x, y in combinations(chain, 2)
                 if any(x in other and y in other for other in b)]
        num += len(chain) - _components(chain, edges)
        den += len(chain) - 1
    return num, den


def muc(key, response):
    r_num, r_den = _muc_side(key, response)
    p_num, p_den = _muc_side(response, key)
    return _prf(p_num, p_den, r_num, r_den)


def _b3_side(a, b):
    num = 0.0
    den = 0
    for chain in a:
        for m in chain:
            den += 1
            partner = [c for c in b if m in c]
            if partner:
                num += len(set(chain) & set(partner[0])) / len(chain)
    return num, den


def b_cubed(key, response):
    r_num, r_den = _b3_side(key, response)
    p_num, p_den = _b3_side(response, key)
    return _prf(p_num, p_den, r_num, r_den)


def _phi4(k, r):
    k, r = set(k), set(r)
    return 2 * len(k & r) / (len(k) + len(r))


def ceaf_e(key, response):
    """Best one-to-one chain alignment found by enumerating all of them."""
    best = 0.0
    if key and response:
        small, large, flip = (key, response, False) if len(key) <= len(response) else (response, key, True)
        for perm in permutations(range(len(large)), len(small)):
            total = 0.0
            for i, j in enumerate(perm):
                k, r = (small[i], large[j]) if not flip else (large[j], small[i])
                total += _phi4(k, r)
            best = max(best, total)
    return _prf(best, len(response), best, len(key))


def coref_all(key, response, keep_singletons=False):
    key = [list(c) for c in key if c]
    response = [list(c) for c in response if c]
    if not keep_singletons:
        key = [c for c in key if len(c) > 1]
        response = [c for c in response if len(c) > 1]
    return muc(key, response), b_cubed(key, response), ceaf_e(key, response)


def attachment(gold, pred):
    """(uas, las) by plain counting over (dep, head, rel) triples."""
    g = {d: (h, r) for d, h, r in gold}
    p = {d: (h, r) for d, h, r in pred}
    total = len(g)
    head_ok = 0
    both_ok = 0
    for d in g:
        if g[d][0] == p[d][0]:
            head_ok += 1
            if g[d][1] == p[d][1]:
                both_ok += 1
    return head_ok / total, both_ok / total


def tagging(gold, pred):
    right = 0
    for i in range(len(gold)):
        if gold[i] == pred[i]:
            right += 1
    return right / len(gold)
