"""Pure-Python kernels.  Same contracts as the compiled ``_speedups`` module."""

from math import gcd


def pl_apply(table, n, d):
    """Apply a piecewise-affine table to the rational n/d (d > 0).

    ``table = (xn, xd, sn, sd, cn, cd)``: breakpoints x_k = xn[k]/xd[k]
    (strictly increasing, at least two) and, for piece k, y = s_k*x + c_k.
    Points outside [x_0, x_last] are returned unchanged.  Result is in
    lowest terms.
    """
    xn, xd, sn, sd, cn, cd = table
    last = len(xn) - 1
    if n * xd[0] < xn[0] * d or n * xd[last] > xn[last] * d:
        return n, d
    lo, hi = 0, last
    # largest k < last with x_k <= x
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if xn[mid] * d <= n * xd[mid]:
            lo = mid
        else:
            hi = mid
    k = lo
    a, b, c, e = sn[k], sd[k], cn[k], cd[k]
    num = a * n * e + c * b * d
    den = b * e * d
    g = gcd(num, den)
    return num // g, den // g


def search_relation(letters, max_len):
    """Length-lex first reduced word whose product is the identity.

    ``letters`` lists flat permutation arrays in letter order; letter ``k``
    and ``k ^ 1`` are mutually inverse.  Products compose left to right as
    group elements: word w_1...w_L evaluates to w_1 * ... * w_L where
    (p*q)[i] = p[q[i]].  Returns the letter indices or None.
    """
    nl = len(letters)
    if nl == 0:
        return None
    width = len(letters[0])
    ident = tuple(range(width))
    letters = [tuple(p) for p in letters]
    for length in range(1, max_len + 1):
        word = [0] * length
        prods = [None] * (length + 1)
        prods[0] = ident
        depth = 0
        choice = [-1] * length
        while depth >= 0:
            choice[depth] += 1
            k = choice[depth]
            if depth > 0 and k < nl and k == (word[depth - 1] ^ 1):
                choice[depth] += 1
                k += 1
            if k >= nl:
                choice[depth] = -1
                depth -= 1
                continue
            word[depth] = k
            p = prods[depth]
            q = letters[k]
            r = tuple([p[i] for i in q])
            if depth + 1 == length:
                if r == ident:
                    return list(word)
                continue
            prods[depth + 1] = r
            depth += 1
    return None
