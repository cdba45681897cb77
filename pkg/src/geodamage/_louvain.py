"""Compiled kernels for Louvain with a block-structured null model.

The modularity matrix is B = A - sum_s coef[s] * K[:, s] K[:, s]^T, where
column s of K holds each node's strength inside null-model block s.  One
block reproduces ordinary Newman-Girvan modularity; one block per layer
with zero strength on inter-layer links gives the multislice form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

GAIN_TOL = 1e-10


@dataclass(frozen=True)
class WeightedGraph:
    indptr: np.ndarray  # int64 CSR, symmetric, no self entries
    indices: np.ndarray
    weights: np.ndarray
    self_weight: np.ndarray  # diagonal mass of A (counted once per node)
    strength: np.ndarray  # (n, L) null-model strengths
    coef: np.ndarray  # (L,) resolution / (2 m_s), zero for empty blocks
    two_mu: float

    @property
    def n(self) -> int:
        return len(self.indptr) - 1


def csr_from_pairs(n: int, pairs: np.ndarray, weights: np.ndarray):
    """Symmetric CSR arrays from undirected pairs without self-loops."""
    src = np.concatenate([pairs[:, 0], pairs[:, 1]])
    dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
    w = np.concatenate([weights, weights])
    order = np.lexsort((dst, src))
    src, dst, w = src[order], dst[order], w[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, dst.astype(np.int64), w.astype(np.float64)


@numba.njit(cache=True, nogil=True)
def local_move(indptr, indices, weights, strength, coef, comm, order):
    """Greedy single-node moves until no move improves quality.

    ``comm`` is modified in place.  Returns True if any node moved.
    """
    n = indptr.shape[0] - 1
    nblocks = strength.shape[1]
    tot = np.zeros((n, nblocks))
    size = np.zeros(n, dtype=np.int64)
    for a in range(n):
        c = comm[a]
        size[c] += 1
        for s in range(nblocks):
            tot[c, s] += strength[a, s]
    free = np.empty(n, dtype=np.int64)
    nfree = 0
    for c in range(n - 1, -1, -1):
        if size[c] == 0:
            free[nfree] = c
            nfree += 1

    link = np.zeros(n)
    seen = np.zeros(n, dtype=np.bool_)
    touched = np.empty(n, dtype=np.int64)
    any_move = False
    while True:
        moved = False
        for a in order:
            ca = comm[a]
            ntouched = 0
            for e in range(indptr[a], indptr[a + 1]):
                b = indices[e]
                if b == a:
                    continue
                cb = comm[b]
                if not seen[cb]:
                    seen[cb] = True
                    touched[ntouched] = cb
                    ntouched += 1
                link[cb] += weights[e]
            for s in range(nblocks):
                tot[ca, s] -= strength[a, s]
            size[ca] -= 1

            null = 0.0
            for s in range(nblocks):
                null += coef[s] * strength[a, s] * tot[ca, s]
            best = ca
            best_gain = link[ca] - null
            for t in range(ntouched):
                c = touched[t]
                if c == ca:
                    continue
                null = 0.0
                for s in range(nblocks):
                    null += coef[s] * strength[a, s] * tot[c, s]
                g = link[c] - null
                if g > best_gain + GAIN_TOL:
                    best = c
                    best_gain = g
            # an empty community has gain exactly 0
            if best_gain < -GAIN_TOL and size[ca] > 0:
                best = free[nfree - 1]
                nfree -= 1
                best_gain = 0.0

            for t in range(ntouched):
                c = touched[t]
                link[c] = 0.0
                seen[c] = False
            for s in range(nblocks):
                tot[best, s] += strength[a, s]
            size[best] += 1
            if size[ca] == 0 and best != ca:
                free[nfree] = ca
                nfree += 1
            if best != ca:
                comm[a] = best
                moved = True
                any_move = True
        if not moved:
            break
    return any_move


@numba.njit(cache=True, nogil=True)
def aggregate(indptr, indices, weights, self_weight, comm, k):
    """Collapse communities (labels 0..k-1) into a k-node graph."""
    n = indptr.shape[0] - 1
    new_self = np.zeros(k)
    for a in range(n):
        new_self[comm[a]] += self_weight[a]
    # dense accumulation per source community, k is small after one pass
    acc = np.zeros(k)
    seen = np.zeros(k, dtype=np.bool_)
    touched = np.empty(k, dtype=np.int64)
    members_ptr = np.zeros(k + 1, dtype=np.int64)
    for a in range(n):
        members_ptr[comm[a] + 1] += 1
    for c in range(k):
        members_ptr[c + 1] += members_ptr[c]
    fill = members_ptr[:-1].copy()
    members = np.empty(n, dtype=np.int64)
    for a in range(n):
        members[fill[comm[a]]] = a
        fill[comm[a]] += 1

    out_ptr = np.zeros(k + 1, dtype=np.int64)
    out_idx = np.empty(indices.shape[0], dtype=np.int64)
    out_w = np.empty(indices.shape[0])
    pos = 0
    for c in range(k):
        nt = 0
        for m in range(members_ptr[c], members_ptr[c + 1]):
            a = members[m]
            for e in range(indptr[a], indptr[a + 1]):
                d = comm[indices[e]]
                if d == c:
                    new_self[c] += weights[e]
                    continue
                if not seen[d]:
                    seen[d] = True
                    touched[nt] = d
                    nt += 1
                acc[d] += weights[e]
        touched[:nt].sort()
        for t in range(nt):
            d = touched[t]
            out_idx[pos] = d
            out_w[pos] = acc[d]
            pos += 1
            acc[d] = 0.0
            seen[d] = False
        out_ptr[c + 1] = pos
    return out_ptr, out_idx[:pos].copy(), out_w[:pos].copy(), new_self


@numba.njit(cache=True, nogil=True)
def _quality(indptr, indices, weights, self_weight, strength, coef, labels, k):
    inner = 0.0
    for a in range(indptr.shape[0] - 1):
        inner += self_weight[a]
        la = labels[a]
        for e in range(indptr[a], indptr[a + 1]):
            if labels[indices[e]] == la:
                inner += weights[e]
    tot = np.zeros((k, strength.shape[1]))
    for a in range(labels.shape[0]):
        for s in range(strength.shape[1]):
            tot[labels[a], s] += strength[a, s]
    null = 0.0
    for c in range(k):
        for s in range(strength.shape[1]):
            null += coef[s] * tot[c, s] * tot[c, s]
    return inner - null


def quality(graph: WeightedGraph, labels: np.ndarray) -> float:
    if graph.two_mu == 0:
        return 0.0
    labels = np.asarray(labels, dtype=np.int64)
    k = int(labels.max()) + 1 if len(labels) else 0
    raw = _quality(graph.indptr, graph.indices, graph.weights, graph.self_weight, graph.strength, graph.coef, labels, k)
    return float(raw / graph.two_mu)


@numba.njit(cache=True, nogil=True)
def _relabel(comm):
    """Renumber labels 0..k-1 in order of first appearance."""
    mapping = np.full(comm.max() + 1, -1, dtype=np.int64)
    out = np.empty(comm.shape[0], dtype=np.int64)
    k = 0
    for i in range(comm.shape[0]):
        c = comm[i]
        if mapping[c] < 0:
            mapping[c] = k
            k += 1
        out[i] = mapping[c]
    return out, k


def louvain(graph: WeightedGraph, rng: np.random.Generator) -> tuple[np.ndarray, float, list[float]]:
    """Multi-level Louvain, repeated from its own result until a pass makes no move.

    Returns (labels, quality, quality after every level that moved).
    """
    n = graph.n
    membership = np.arange(n, dtype=np.int64)
    if graph.two_mu == 0 or n == 0:
        return membership, 0.0, [0.0]

    history = [quality(graph, membership)]
    while True:
        improved = False
        level, node_map = graph, np.arange(n, dtype=np.int64)
        comm = membership.copy()
        while True:
            order = rng.permutation(level.n).astype(np.int64)
            moved = local_move(level.indptr, level.indices, level.weights, level.strength, level.coef, comm, order)
            comm, k = _relabel(comm)
            membership = comm[node_map]
            if moved:
                improved = True
                q = quality(graph, membership)
                if q < history[-1] - 1e-12:
                    raise AssertionError(f"modularity decreased: {history[-1]} -> {q}")
                history.append(q)
            if k == level.n:
                break
            ptr, idx, w, selfw = aggregate(level.indptr, level.indices, level.weights, level.self_weight, comm, k)
            strength = np.zeros((k, level.strength.shape[1]))
            np.add.at(strength, comm, level.strength)
            level = WeightedGraph(ptr, idx, w, selfw, strength, level.coef, level.two_mu)
            node_map = comm[node_map]
            comm = np.arange(k, dtype=np.int64)
        if not improved:
            break
    membership, _ = _relabel(membership)
    return membership, history[-1], history
