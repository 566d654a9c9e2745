"""Compiled inner loops over packed gate arrays."""

import numba
import numpy as np

# gate kind codes shared with circuit.py
X, CX, CCX, H, CP = 0, 1, 2, 3, 4


@numba.njit(cache=True)
def asap_layers(kinds, qubits, last, tlast):
    """Greedy ASAP layering, resumable.

    ``last[q]`` is the layer of the latest gate on ``q`` (0 if none) and
    ``tlast[q]`` the same counting Toffoli layers only; both are updated in
    place.  Returns the highest ``(layer, toffoli_layer)`` reached by the
    processed gates (0 for an empty batch).
    """
    depth = 0
    tdepth = 0
    for g in range(kinds.shape[0]):
        layer = 0
        tl = 0
        for j in range(3):
            q = qubits[g, j]
            if q < 0:
                break
            if last[q] > layer:
                layer = last[q]
            if tlast[q] > tl:
                tl = tlast[q]
        layer += 1
        if kinds[g] == CCX:
            tl += 1
        for j in range(3):
            q = qubits[g, j]
            if q < 0:
                break
            last[q] = layer
            tlast[q] = tl
        if layer > depth:
            depth = layer
        if tl > tdepth:
            tdepth = tl
    return depth, tdepth


@numba.njit(cache=True)
def run_reversible(kinds, qubits, state):
    """Apply X/CX/CCX gates to a bit-sliced state of shape ``(width, words)``."""
    words = state.shape[1]
    full = np.uint64(0xFFFFFFFFFFFFFFFF)
    for g in range(kinds.shape[0]):
        k = kinds[g]
        if k == CX:
            c = qubits[g, 0]
            t = qubits[g, 1]
            for w in range(words):
                state[t, w] ^= state[c, w]
        elif k == CCX:
            a = qubits[g, 0]
            b = qubits[g, 1]
            t = qubits[g, 2]
            for w in range(words):
                state[t, w] ^= state[a, w] & state[b, w]
        elif k == X:
            t = qubits[g, 0]
            for w in range(words):
                state[t, w] ^= full
