"""Reference computations written independently of the package internals.

They use plain scipy.stats densities, brute-force enumeration and Monte
Carlo so that agreement with the package is a genuine cross-check.
"""

import itertools
import math

import numpy as np
from scipy.stats import norm


def levels(v, a):
    return (np.abs(v)[:, None] > np.asarray(a, dtype=float)[None, :]).sum(axis=1) if len(a) else np.zeros(len(v), int)


def cell_mass(u, bit, level, var, a):
    """P(u + N in the (bit, level) interval) straight from norm.cdf."""
    e = [0.0] + list(a) + [np.inf]
    lo, hi = e[level], e[level + 1]
    s = math.sqrt(var)
    if bit == 1:
        return norm.cdf(hi, u, s) - norm.cdf(lo, u, s)
    return norm.cdf(-lo, u, s) - norm.cdf(-hi, u, s)


def level_mass(u, level, var, a):
    return cell_mass(u, 0, level, var, a) + cell_mass(u, 1, level, var, a)


def _h2(p):
    p = np.clip(p, 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = -p * np.log2(p) - (1 - p) * np.log2(1 - p)
    return np.nan_to_num(t)


def _mc_cells(v_a, v_b, v_e, a, n_samples, seed):
    """Yield ``(cell, count, [h-samples x4])`` for every populated cell."""
    rng = np.random.default_rng(seed)
    u = rng.choice([-1.0, 1.0], size=n_samples)
    x = u + math.sqrt(v_a) * rng.standard_normal(n_samples)
    y = u + math.sqrt(v_b) * rng.standard_normal(n_samples)
    z = u + math.sqrt(v_e) * rng.standard_normal(n_samples)
    wa, wb = levels(x, a), levels(y, a)
    k = len(a) + 1
    one = {-1.0: 1.0, 1.0: 1.0}

    def post(obs, var, own, other):
        # P(bit = 1 | obs, cell), weighting each u by the other party's level likelihood
        num = sum(norm.pdf(obs, u_, math.sqrt(var)) * own[u_][1] * other[u_] for u_ in (-1.0, 1.0))
        den = sum(norm.pdf(obs, u_, math.sqrt(var)) * sum(own[u_]) * other[u_] for u_ in (-1.0, 1.0))
        return num / den

    for i in range(k):
        for j in range(k):
            sel = (wa == i) & (wb == j)
            cnt = int(sel.sum())
            if cnt == 0:
                continue
            pa = {u_: [cell_mass(u_, b, i, v_a, a) for b in (0, 1)] for u_ in (-1.0, 1.0)}
            pb = {u_: [cell_mass(u_, b, j, v_b, a) for b in (0, 1)] for u_ in (-1.0, 1.0)}
            la = {u_: sum(pa[u_]) for u_ in pa}
            lb = {u_: sum(pb[u_]) for u_ in pb}
            yield (i, j), cnt, [
                _h2(post(z[sel], v_e, pa, lb)),
                _h2(post(y[sel], v_b, pa, one)),
                _h2(post(z[sel], v_e, pb, la)),
                _h2(post(x[sel], v_a, pb, one)),
            ]


def _proposal_draws(rng, sigma, regions, n):
    """Draws from ``q = 1/2 p_mix|R + 1/2 uniform(R)`` and the density ``q``.

    ``p_mix`` is the observation's marginal ``(N(-1, s^2) + N(1, s^2)) / 2``
    restricted to the union of intervals ``R``.  The uniform half reaches
    regions the marginal almost never visits, such as the origin at high SNR.
    """
    from scipy.stats import truncnorm

    comps, mass = [], []
    for lo, hi in regions:
        for u in (-1.0, 1.0):
            comps.append((u, lo, hi))
            mass.append(0.5 * (norm.cdf(hi, u, sigma) - norm.cdf(lo, u, sigma)))
    mass = np.array(mass)
    p_r = mass.sum()
    n_mix = n // 2
    pick = rng.choice(len(comps), size=n_mix, p=mass / p_r)
    out = np.empty(n)
    for c, (u, lo, hi) in enumerate(comps):
        sel = pick == c
        if sel.any():
            out[:n_mix][sel] = truncnorm.rvs((lo - u) / sigma, (hi - u) / sigma, loc=u, scale=sigma,
                                             size=int(sel.sum()), random_state=rng)
    widths = np.array([hi - lo for lo, hi in regions])
    side = rng.choice(len(regions), size=n - n_mix, p=widths / widths.sum())
    lows = np.array([lo for lo, _ in regions])
    out[n_mix:] = lows[side] + widths[side] * rng.uniform(size=n - n_mix)
    phi = {u: norm.pdf(out, u, sigma) for u in (-1.0, 1.0)}
    q = 0.5 * (0.5 * (phi[-1.0] + phi[1.0]) / p_r) + 0.5 / widths.sum()
    return out, phi, q


def mc_conditional_entropies(v_a, v_b, v_e, a, n_samples, seed, span=10.0):
    """Importance-sampled Monte-Carlo estimates of the four per-cell entropies.

    Returns a dict ``cell -> (P(cell), means[4], stderrs[4])`` with the order
    (H(X~|Z), H(X~|Y), H(Y~|Z), H(Y~|X)).  Each entropy is
    ``E[h(P(bit = 1 | obs, cell)) | cell]`` estimated from ``n_samples``
    draws of the conditioning observation under a defensive proposal, so the
    weights stay bounded and the standard error is honest even when the
    posterior is uncertain only on a rare set of observations.  Observations
    beyond ``span`` standard deviations of the signal points are ignored.
    """
    rng = np.random.default_rng(seed)
    a = list(a)
    k = len(a) + 1
    e = [0.0] + a + [np.inf]
    var = {"x": v_a, "y": v_b, "z": v_e}
    lev = {p: {u: np.array([level_mass(u, j, var[p], a) for j in range(k)]) for u in (-1.0, 1.0)} for p in "xy"}
    one = {p: {u: np.array([cell_mass(u, 1, j, var[p], a) for j in range(k)]) for u in (-1.0, 1.0)} for p in "xy"}
    weight = {(i, j): 0.5 * sum(lev["x"][u][i] * lev["y"][u][j] for u in (-1.0, 1.0))
              for i in range(k) for j in range(k)}

    def draws(cond, j):
        s = math.sqrt(var[cond])
        if cond == "z":
            return _proposal_draws(rng, s, [(-1 - span * s, 1 + span * s)], n_samples)
        lo, hi = e[j], min(e[j + 1], max(e[j], 1.0) + span * s)
        return _proposal_draws(rng, s, [(lo, hi), (-hi, -lo)], n_samples)

    est = {c: (weight[c], np.full(4, np.nan), np.full(4, np.nan)) for c in weight if weight[c] > 0}
    kinds = [(0, "x", "z"), (1, "x", "y"), (2, "y", "z"), (3, "y", "x")]
    for q_idx, target, cond in kinds:
        other = "y" if target == "x" else "x"
        for j_cond in (range(k) if cond != "z" else [None]):
            o, phi, q = draws(cond, j_cond)
            for (i, j), (pc, means, ses) in est.items():
                w_t, w_o = (i, j) if target == "x" else (j, i)
                if cond != "z" and w_o != j_cond:
                    continue
                # per-u factor multiplying the conditioner's density
                g = {u: (lev[other][u][w_o] if cond == "z" else 1.0) for u in (-1.0, 1.0)}
                num = sum(phi[u] * one[target][u][w_t] * g[u] for u in (-1.0, 1.0))
                den = sum(phi[u] * lev[target][u][w_t] * g[u] for u in (-1.0, 1.0))
                with np.errstate(invalid="ignore", divide="ignore"):
                    post = np.where(den > 0, num / den, 0.5)
                # density of the observation jointly with the cell, over P(cell) and q
                w = 0.5 * den / pc / q
                vals = w * _h2(post)
                means[q_idx] = vals.mean()
                ses[q_idx] = vals.std(ddof=1) / math.sqrt(n_samples)
    return est


def mc_soft_rate(v_a, v_b, v_e, a, n_samples, seed):
    """End-to-end Monte-Carlo rate ``sum_cells P * max(0, dX, dY)`` and its standard error.

    Cell weights are empirical frequencies and each difference is averaged
    per sample, so the error bar includes the correlation of the two terms.
    """
    rate = var = 0.0
    for _, cnt, s in _mc_cells(v_a, v_b, v_e, a, n_samples, seed):
        dx, dy = s[0] - s[1], s[2] - s[3]
        best = max((0.0, None), (dx.mean(), dx), (dy.mean(), dy), key=lambda t: t[0])
        if best[1] is None:
            continue
        # the contribution is the sample mean of 1{cell} * diff over all draws
        g = best[1]
        m2 = (g ** 2).sum() / n_samples
        m1 = g.sum() / n_samples
        rate += m1
        var += (m2 - m1 ** 2) / n_samples
    return rate, math.sqrt(var)


def quad_conditional_entropy(target, conditioner, cell, v_a, v_b, v_e, a):
    """H(target bit | conditioner, cell) in bits with scipy.integrate.quad."""
    from scipy.integrate import quad

    var = {"x": v_a, "y": v_b}
    i, j = cell
    w_t, w_o = (i, j) if target == "x" else (j, i)
    own = {u: [cell_mass(u, b, w_t, var[target], a) for b in (0, 1)] for u in (-1.0, 1.0)}
    other_party = "y" if target == "x" else "x"
    if conditioner == "z":
        c_var = v_e
        weight = {u: level_mass(u, w_o, var[other_party], a) for u in (-1.0, 1.0)}
        s = math.sqrt(c_var)
        regions = [(-1 - 12 * s, 1 + 12 * s)]
    else:
        c_var = var[conditioner]
        weight = {-1.0: 1.0, 1.0: 1.0}
        e = [0.0] + list(a) + [np.inf]
        s = math.sqrt(c_var)
        lo, hi = e[w_o], min(e[w_o + 1], max(e[w_o], 1.0) + 12 * s)
        regions = [(lo, hi), (-hi, -lo)]
    s = math.sqrt(c_var)

    def joint(o, bit=None):
        tot = 0.0
        for u in (-1.0, 1.0):
            m = own[u][bit] if bit is not None else sum(own[u])
            tot += 0.5 * norm.pdf(o, u, s) * m * weight[u]
        return tot

    def f(o):
        den = joint(o)
        if den == 0.0:
            return 0.0
        p = joint(o, 1) / den
        return den * float(_h2(np.array(p)))

    num = mass = 0.0
    for lo, hi in regions:
        pts = [v for v in (-1.0, 0.0, 1.0) if lo < v < hi]
        num += quad(f, lo, hi, epsabs=1e-15, epsrel=1e-13, limit=500, points=pts or None)[0]
        mass += quad(joint, lo, hi, epsabs=1e-16, epsrel=1e-13, limit=500, points=pts or None)[0]
    return num / mass


def riemann_posterior_x_given_y(y, cell, v_a, v_b, a, step=1e-4, span=12.0):
    """P(X~ = 1 | Y = y, W_A, W_B) by summing the joint density of (x, y) on a grid."""
    w_a, _ = cell
    e = [0.0] + list(a) + [np.inf]
    lo, hi = e[w_a], min(e[w_a + 1], span)
    panels = int(math.ceil((hi - lo) / step))
    step = (hi - lo) / panels
    xs = lo + step * (np.arange(panels) + 0.5)
    num = den = 0.0
    for u in (-1.0, 1.0):
        py = norm.pdf(y, u, math.sqrt(v_b))
        pos = norm.pdf(xs, u, math.sqrt(v_a)).sum() * step
        neg = norm.pdf(-xs, u, math.sqrt(v_a)).sum() * step
        num += py * pos
        den += py * (pos + neg)
    return num / den


def brute_force_repetition_rate(n_rep, eps_a, eps_b, eps_e):
    """Repetition-code rate by listing every noise pattern and Alice's bit.

    Eve is given her whole vector ``Z^N xor M`` rather than a count.
    """
    acc = 0.0
    joint_eve = {}
    joint_bob = {}
    for c in (0, 1):
        for pattern in itertools.product((0, 1), repeat=3 * n_rep):
            na, nb, ne = pattern[:n_rep], pattern[n_rep:2 * n_rep], pattern[2 * n_rep:]
            p = 0.5
            for bit, e in zip(pattern, [eps_a] * n_rep + [eps_b] * n_rep + [eps_e] * n_rep):
                p *= e if bit else 1 - e
            bob = tuple(c ^ a_ ^ b_ for a_, b_ in zip(na, nb))
            if len(set(bob)) != 1:
                continue
            acc += p
            eve = tuple(c ^ a_ ^ e_ for a_, e_ in zip(na, ne))
            joint_eve[(c, eve)] = joint_eve.get((c, eve), 0.0) + p
            joint_bob[(c, bob[0])] = joint_bob.get((c, bob[0]), 0.0) + p

    def cond_entropy(joint):
        obs = {}
        for (c, o), p in joint.items():
            obs.setdefault(o, [0.0, 0.0])[c] += p / acc
        h = 0.0
        for p0, p1 in obs.values():
            tot = p0 + p1
            for q in (p0, p1):
                if q > 0:
                    h -= q * math.log2(q / tot)
        return h

    return acc / n_rep * max(0.0, cond_entropy(joint_eve) - cond_entropy(joint_bob)), acc
