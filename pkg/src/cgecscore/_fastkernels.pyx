# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled counting kernels.

Mirrors cgecscore._pykernels exactly. Characters are mapped to dense local
ids per call and n-grams are packed into 64-bit keys, so lookups never touch
Python objects. All outputs are exact integers; scores computed on top of
either backend are bit-identical.
"""

from cython.operator cimport dereference as deref, preincrement as inc

from libc.stdint cimport int64_t, uint32_t, uint64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector


cdef void _encode(str text, unordered_map[uint32_t, uint32_t]& alphabet,
                  vector[uint32_t]& out):
    # ids start at 1; assigned in first-sight order
    cdef Py_UCS4 ch
    cdef uint32_t cp, nid
    cdef unordered_map[uint32_t, uint32_t].iterator it
    out.reserve(len(text))
    for ch in text:
        cp = <uint32_t> ch
        it = alphabet.find(cp)
        if it == alphabet.end():
            nid = <uint32_t> (alphabet.size() + 1)
            alphabet[cp] = nid
            out.push_back(nid)
        else:
            out.push_back(deref(it).second)


cdef void _count_ngrams(vector[uint32_t]& ids, int order, int bits,
                        unordered_map[uint64_t, int64_t]& out):
    cdef size_t n = ids.size()
    cdef size_t i
    cdef uint64_t key = 0
    cdef uint64_t mask
    cdef int width = bits * order
    if n < <size_t> order:
        return
    if width >= 64:
        mask = <uint64_t> 0 - 1
    else:
        mask = ((<uint64_t> 1) << width) - 1
    for i in range(n):
        key = ((key << bits) | ids[i]) & mask
        if i + 1 >= <size_t> order:
            out[key] += 1


cdef void _merge_max(vector[uint32_t]& ids, int order, int bits,
                     unordered_map[uint64_t, int64_t]& acc):
    cdef unordered_map[uint64_t, int64_t] local
    cdef unordered_map[uint64_t, int64_t].iterator it, jt
    cdef uint64_t k
    cdef int64_t v
    _count_ngrams(ids, order, bits, local)
    it = local.begin()
    while it != local.end():
        k = deref(it).first
        v = deref(it).second
        jt = acc.find(k)
        if jt == acc.end() or deref(jt).second < v:
            acc[k] = v
        inc(it)


def ngram_clip_stats(str hyp, refs, int max_order):
    """(clipped match count, candidate n-gram total) for orders 1..max_order.

    Raises OverflowError when a packed n-gram key would not fit in 64 bits
    (very large local alphabets or very high orders); the dispatcher falls
    back to the pure-Python kernel in that case.
    """
    if max_order < 1:
        raise ValueError(f"max_order must be >= 1, got {max_order}")
    cdef unordered_map[uint32_t, uint32_t] alphabet
    cdef vector[uint32_t] hyp_ids
    cdef vector[vector[uint32_t]] ref_ids
    cdef str ref
    cdef size_t ri = 0

    _encode(hyp, alphabet, hyp_ids)
    ref_ids.resize(len(refs))
    for ref in refs:
        _encode(ref, alphabet, ref_ids[ri])
        ri += 1

    cdef int bits = 1
    while ((<uint64_t> 1) << bits) <= <uint64_t> alphabet.size():
        bits += 1
    if bits * max_order > 64:
        raise OverflowError("packed n-gram key does not fit in 64 bits")

    results = []
    cdef int order
    cdef int64_t num, den, hc, cap
    cdef size_t j
    cdef unordered_map[uint64_t, int64_t] hyp_counts, max_counts
    cdef unordered_map[uint64_t, int64_t].iterator it, jt
    for order in range(1, max_order + 1):
        hyp_counts.clear()
        max_counts.clear()
        den = <int64_t> hyp_ids.size() - order + 1
        if den < 0:
            den = 0
        num = 0
        if den > 0:
            _count_ngrams(hyp_ids, order, bits, hyp_counts)
            for j in range(ref_ids.size()):
                _merge_max(ref_ids[j], order, bits, max_counts)
            it = hyp_counts.begin()
            while it != hyp_counts.end():
                hc = deref(it).second
                jt = max_counts.find(deref(it).first)
                if jt != max_counts.end():
                    cap = deref(jt).second
                    num += hc if hc < cap else cap
                inc(it)
        results.append((num, den))
    return results


def char_overlap(str a, str b):
    """Size of the character multiset intersection of two strings."""
    cdef unordered_map[uint32_t, int64_t] counts
    cdef unordered_map[uint32_t, int64_t].iterator it
    cdef Py_UCS4 ch
    cdef uint32_t cp
    cdef int64_t matched = 0
    for ch in a:
        counts[<uint32_t> ch] += 1
    for ch in b:
        cp = <uint32_t> ch
        it = counts.find(cp)
        if it != counts.end() and deref(it).second > 0:
            counts[cp] = deref(it).second - 1
            matched += 1
    return matched
