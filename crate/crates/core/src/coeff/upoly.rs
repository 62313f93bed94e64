//! Dense univariate polynomials over `F_p`, coefficients stored low to high.
//!
//! A polynomial is kept trimmed: the last stored coefficient is nonzero, and
//! the zero polynomial is the empty vector.

pub(crate) type UPoly = Vec<u32>;

#[inline]
fn mulmod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    // Fermat: a^(p-2)
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn trim(a: &mut UPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn degree(a: &[u32]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub(crate) fn add(a: &[u32], b: &[u32], p: u32) -> UPoly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = (*o + s) % p;
    }
    trim(&mut out);
    out
}

pub(crate) fn neg(a: &[u32], p: u32) -> UPoly {
    a.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect()
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> UPoly {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), 0);
    }
    for (o, s) in out.iter_mut().zip(b) {
        *o = (*o + p - s) % p;
    }
    trim(&mut out);
    out
}

pub(crate) fn scale(a: &[u32], s: u32, p: u32) -> UPoly {
    if s.is_multiple_of(p) {
        return Vec::new();
    }
    a.iter().map(|&x| mulmod(x, s, p)).collect()
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u64; a.len() + b.len() - 1];
    let pp = p as u64;
    // Accumulate in u64 and fold modulo p before overflow can occur.
    let limit = u64::MAX / (pp * pp).max(1) - 1;
    let mut pending = 0u64;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] += x as u64 * y as u64;
        }
        pending += 1;
        if pending >= limit {
            for v in acc.iter_mut() {
                *v %= pp;
            }
            pending = 0;
        }
    }
    let mut out: UPoly = acc.into_iter().map(|v| (v % pp) as u32).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by nonzero `b`.
pub(crate) fn divrem(a: &[u32], b: &[u32], p: u32) -> (UPoly, UPoly) {
    assert!(!b.is_empty(), "polynomial division by zero");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    let mut rem = a.to_vec();
    let mut quot = vec![0u32; a.len() - db];
    for k in (0..quot.len()).rev() {
        let coef = mulmod(rem[k + db], lead_inv, p);
        quot[k] = coef;
        if coef != 0 {
            for (j, &bj) in b.iter().enumerate() {
                rem[k + j] = (rem[k + j] + p - mulmod(coef, bj, p)) % p;
            }
        }
    }
    rem.truncate(db);
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

/// Exact quotient; the caller guarantees `b | a`.
pub(crate) fn div_exact(a: &[u32], b: &[u32], p: u32) -> UPoly {
    if b.len() == 1 {
        return scale(a, inv_mod(b[0], p), p);
    }
    let (q, r) = divrem(a, b, p);
    debug_assert!(r.is_empty(), "inexact polynomial division");
    q
}

pub(crate) fn monic(a: &[u32], p: u32) -> UPoly {
    match a.last() {
        None => Vec::new(),
        Some(&1) => a.to_vec(),
        Some(&lc) => scale(a, inv_mod(lc, p), p),
    }
}

/// Monic greatest common divisor (zero only if both inputs are zero).
pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> UPoly {
    if a.len() == 1 || b.len() == 1 {
        // a nonzero constant on either side
        return vec![1];
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

pub(crate) fn is_one(a: &[u32]) -> bool {
    a.len() == 1 && a[0] == 1
}

/// Render with `var` as the indeterminate, highest degree first.
pub(crate) fn format(a: &[u32], var: &str) -> String {
    if a.is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (e, &co) in a.iter().enumerate().rev() {
        if co == 0 {
            continue;
        }
        let mono = match e {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        };
        parts.push(match (co, e) {
            (_, 0) => co.to_string(),
            (1, _) => mono,
            _ => format!("{co}*{mono}"),
        });
    }
    parts.join("+")
}
