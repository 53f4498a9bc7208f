# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled tokenizer kernel.

Single scan over the lowercase-folded line.  Must stay behaviorally
identical to `rarelex._pytokenize` (the parity tests enforce it): maximal
runs of letters/digits, joined across one internal hyphen or apostrophe.
Lowercasing is delegated to str.lower() so both kernels share CPython's
case folding.
"""

cdef extern from "Python.h":
    int PyUnicode_KIND(object o)
    void* PyUnicode_DATA(object o)
    Py_ssize_t PyUnicode_GET_LENGTH(object o)
    Py_UCS4 PyUnicode_READ(int kind, void *data, Py_ssize_t index)
    object PyUnicode_Substring(object o, Py_ssize_t start, Py_ssize_t end)
    bint Py_UNICODE_ISALNUM(Py_UCS4 ch)


def tokenize(text):
    """Lowercase-fold `text` and return its tokens in order."""
    cdef object s = text.lower()
    cdef int kind = PyUnicode_KIND(s)
    cdef void *data = PyUnicode_DATA(s)
    cdef Py_ssize_t n = PyUnicode_GET_LENGTH(s)
    cdef Py_ssize_t i = 0, start
    cdef Py_UCS4 ch
    out = []
    while i < n:
        ch = PyUnicode_READ(kind, data, i)
        if not Py_UNICODE_ISALNUM(ch):
            i += 1
            continue
        start = i
        i += 1
        while i < n:
            ch = PyUnicode_READ(kind, data, i)
            if Py_UNICODE_ISALNUM(ch):
                i += 1
            elif (ch == 0x2D or ch == 0x27) and i + 1 < n and \
                    Py_UNICODE_ISALNUM(PyUnicode_READ(kind, data, i + 1)):
                i += 2
            else:
                break
        out.append(PyUnicode_Substring(s, start, i))
    return out


def count_into(text, dict counts):
    """Count the tokens of one line into `counts`; returns tokens seen."""
    cdef object s = text.lower()
    cdef int kind = PyUnicode_KIND(s)
    cdef void *data = PyUnicode_DATA(s)
    cdef Py_ssize_t n = PyUnicode_GET_LENGTH(s)
    cdef Py_ssize_t i = 0, start
    cdef Py_ssize_t emitted = 0
    cdef Py_UCS4 ch
    cdef object tok
    while i < n:
        ch = PyUnicode_READ(kind, data, i)
        if not Py_UNICODE_ISALNUM(ch):
            i += 1
            continue
        start = i
        i += 1
        while i < n:
            ch = PyUnicode_READ(kind, data, i)
            if Py_UNICODE_ISALNUM(ch):
                i += 1
            elif (ch == 0x2D or ch == 0x27) and i + 1 < n and \
                    Py_UNICODE_ISALNUM(PyUnicode_READ(kind, data, i + 1)):
                i += 2
            else:
                break
        tok = PyUnicode_Substring(s, start, i)
        counts[tok] = counts.get(tok, 0) + 1
        emitted += 1
    return emitted
