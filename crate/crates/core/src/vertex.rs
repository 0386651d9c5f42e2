//! Eight-vertex R-matrix, its k×k fusion and the crossing matrix Q.
//!
//! Two-site operators are stored as `M[out, in]` over the basis
//! `(++, +-, -+, --)`. A spin index `i` in `0..=k` stands for `ε = k - 2i`.

use alloc::vec;
use alloc::vec::Vec;

use crate::elliptic::{double_pochhammer, theta_jacobi, xpow, SINGULAR_FLOOR};
use crate::linalg::{null_vector, CMat};
use crate::{Error, ModelParams, Result, C64};

/// Spin values `k, k-2, ..., -k`.
pub fn spins(k: usize) -> Vec<i32> {
    (0..=k).map(|i| k as i32 - 2 * i as i32).collect()
}

/// Position of spin `eps` in [`spins`].
pub fn spin_index(k: usize, eps: i32) -> Option<usize> {
    let d = k as i32 - eps;
    if d < 0 || d % 2 != 0 || d > 2 * k as i32 {
        None
    } else {
        Some((d / 2) as usize)
    }
}

/// Weights `a, b, c, d` without the `R_0` factor.
pub fn abcd(u: C64, p: &ModelParams) -> Result<[C64; 4]> {
    let t = p.tau / 2.0;
    let s = 1.0 / (2.0 * p.r);
    let th = |i: u8, v: C64| theta_jacobi(i, v, t);
    let one = C64::new(s, 0.0);
    let zero = C64::new(0.0, 0.0);
    let (v, w) = (u * s, (u + 1.0) * s);
    let t2_0 = th(2, zero)?;
    let (t1_1, t2_1) = (th(1, one)?, th(2, one)?);
    let (t1_v, t2_v) = (th(1, v)?, th(2, v)?);
    let (t1_w, t2_w) = (th(1, w)?, th(2, w)?);
    if t1_w.norm() < SINGULAR_FLOOR || t2_w.norm() < SINGULAR_FLOOR {
        return Err(Error::Singular("R-matrix theta denominator"));
    }
    Ok([
        t2_1 * t2_v / (t2_0 * t2_w),
        t2_1 * t1_v / (t2_0 * t1_w),
        t1_1 * t2_v / (t2_0 * t1_w),
        -t1_1 * t1_v / (t2_0 * t2_w),
    ])
}

/// Scalar factor `R_0(u)` as a ratio of double Pochhammer products in `(x^4, p)`.
pub fn r0_scalar(u: C64, p: &ModelParams) -> Result<C64> {
    let x = p.x;
    let z = xpow(x, u * 2.0);
    let pp = C64::new(p.p, 0.0);
    let q2 = x * x;
    let q4 = C64::new(q2 * q2, 0.0);
    let dp = |w: C64| double_pochhammer(w, q4, pp);
    let num = dp(pp * q2 * z)? * dp(z * q2)? * dp(pp / z)? * dp(q4 / z)?;
    let den = dp(pp * q2 / z)? * dp(q2 / z)? * dp(pp * z)? * dp(q4 * z)?;
    if den.norm() < SINGULAR_FLOOR {
        return Err(Error::Singular("R_0 denominator"));
    }
    let pref = xpow(x, -u * ((p.r - 1.0) / p.r));
    Ok(pref * num / den)
}

/// Eight-vertex `R(u)` as a 4×4 matrix, `R_0` included.
pub fn r_matrix(u: C64, p: &ModelParams) -> Result<CMat> {
    let [a, b, c, d] = abcd(u, p)?;
    let r0 = r0_scalar(u, p)?;
    let z = C64::new(0.0, 0.0);
    let m = CMat::from_rows(4, 4, vec![a, z, z, d, z, b, c, z, z, c, b, z, d, z, z, a]);
    Ok(m.scale(r0))
}

/// Flip operator on `C^d ⊗ C^d`.
pub fn permutation(d: usize) -> CMat {
    let mut m = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m[(j * d + i, i * d + j)] = C64::new(1.0, 0.0);
        }
    }
    m
}

fn digits(mut idx: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for s in (0..n).rev() {
        out[s] = idx % d;
        idx /= d;
    }
    out
}

fn undigits(ds: &[usize], d: usize) -> usize {
    ds.iter().fold(0, |acc, &x| acc * d + x)
}

/// Embeds a two-site operator on `C^d ⊗ C^d` into sites `i`, `j` of `(C^d)^{⊗n}`.
pub fn embed_pair(op: &CMat, d: usize, i: usize, j: usize, n: usize) -> CMat {
    assert!(i != j && i < n && j < n, "bad sites");
    let dim = d.pow(n as u32);
    let mut out = CMat::zeros(dim, dim);
    for col in 0..dim {
        let ds = digits(col, d, n);
        let src = ds[i] * d + ds[j];
        for dst in 0..d * d {
            let v = op[(dst, src)];
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            let mut nd = ds.clone();
            nd[i] = dst / d;
            nd[j] = dst % d;
            out[(undigits(&nd, d), col)] += v;
        }
    }
    out
}

/// Operator permuting tensor slots: slot `s` moves to slot `perm[s]`.
fn slot_permutation(perm: &[usize]) -> CMat {
    let n = perm.len();
    let dim = 1usize << n;
    let mut m = CMat::zeros(dim, dim);
    for col in 0..dim {
        let ds = digits(col, 2, n);
        let mut nd = vec![0; n];
        for s in 0..n {
            nd[perm[s]] = ds[s];
        }
        m[(undigits(&nd, 2), col)] = C64::new(1.0, 0.0);
    }
    m
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Symmetrizer `Π_{1..k}` on `(C^2)^{⊗k}`, the average over all slot permutations.
pub fn symmetrizer(k: usize) -> CMat {
    let ps = permutations(k);
    let mut tot = CMat::zeros(1 << k, 1 << k);
    for p in &ps {
        tot = &tot + &slot_permutation(p);
    }
    tot.scale(C64::new(1.0 / ps.len() as f64, 0.0))
}

fn binom(n: usize, m: usize) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `v^{(k)}_ε` for spin index `idx`: the normalized sum of strings with `idx` minus signs.
pub fn basis_vector(k: usize, idx: usize) -> Vec<C64> {
    let w = 1.0 / binom(k, idx);
    (0..1usize << k)
        .map(|s| if s.count_ones() as usize == idx { C64::new(w, 0.0) } else { C64::new(0.0, 0.0) })
        .collect()
}

/// Ambient index of the string `+...+-...-` with `idx` minus signs.
pub fn sorted_string(idx: usize) -> usize {
    (1usize << idx) - 1
}

/// Coordinates of a symmetric vector of `(C^2)^{⊗k}` in the `v^{(k)}_ε` basis.
pub fn extract(k: usize, w: &[C64]) -> Vec<C64> {
    (0..=k).map(|i| w[sorted_string(i)] * binom(k, i)).collect()
}

/// Same as [`extract`] for a vector of `(C^2)^{⊗k} ⊗ (C^2)^{⊗k}`.
pub fn extract_pair(k: usize, w: &[C64]) -> Vec<C64> {
    let d = 1usize << k;
    let mut out = Vec::with_capacity((k + 1) * (k + 1));
    for i in 0..=k {
        for j in 0..=k {
            out.push(w[sorted_string(i) * d + sorted_string(j)] * (binom(k, i) * binom(k, j)));
        }
    }
    out
}

/// Kronecker product of vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Fused `R^{(k,k)}(u)` acting on `(C^2)^{⊗2k}`, before restriction to `V^{(k)} ⊗ V^{(k)}`.
///
/// `order` lists the barred sites `j` in the order their row operators
/// `R_{1..k, j̄}(u - k + j)` are multiplied, left to right. The standard
/// order is `k, k-1, ..., 1`.
pub fn r_fused_ambient_ordered(k: usize, u: C64, order: &[usize], p: &ModelParams) -> Result<CMat> {
    let n = 2 * k;
    let dim = 1usize << n;
    let sym = symmetrizer(k);
    let eye = CMat::identity(1 << k);
    let pi1 = sym.kron(&eye);
    let pi2 = eye.kron(&sym);
    // R(u + j - i) for i, j in 1..=k: offsets -(k-1)..=(k-1)
    let mut cache: Vec<CMat> = Vec::with_capacity(2 * k - 1);
    for off in 0..2 * k - 1 {
        cache.push(r_matrix(u + (off as f64 - (k as f64 - 1.0)), p)?);
    }
    let mut total = CMat::identity(dim);
    for &j in order {
        let mut row = CMat::identity(dim);
        for i in 1..=k {
            let off = (j + k - 1) - i;
            row = &row * &embed_pair(&cache[off], 2, i - 1, k + j - 1, n);
        }
        total = &total * &(&pi1 * &row);
    }
    Ok(&pi2 * &total)
}

pub fn r_fused_ambient(k: usize, u: C64, p: &ModelParams) -> Result<CMat> {
    let order: Vec<usize> = (1..=k).rev().collect();
    r_fused_ambient_ordered(k, u, &order, p)
}

/// Fused R-matrix on `V^{(k)} ⊗ V^{(k)}` in the `v^{(k)}_ε` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RTensor {
    pub k: usize,
    pub u: C64,
    /// `m[(o1 (k+1) + o2, i1 (k+1) + i2)]`: coefficient of `v_{o1} ⊗ v_{o2}` in the image of `v_{i1} ⊗ v_{i2}`.
    pub m: CMat,
}

impl RTensor {
    /// Entry by spin indices: outgoing `(o1, o2)`, incoming `(i1, i2)`.
    pub fn get(&self, o1: usize, o2: usize, i1: usize, i2: usize) -> C64 {
        let d = self.k + 1;
        self.m[(o1 * d + o2, i1 * d + i2)]
    }
}

/// Restricts an ambient fused operator to `V^{(k)} ⊗ V^{(k)}`.
pub fn restrict(k: usize, ambient: &CMat) -> CMat {
    let d = k + 1;
    let mut t = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let img = ambient.mul_vec(&kron_vec(&basis_vector(k, i), &basis_vector(k, j)));
            let coords = extract_pair(k, &img);
            for (row, v) in coords.into_iter().enumerate() {
                t[(row, i * d + j)] = v;
            }
        }
    }
    t
}

pub fn r_fused(k: usize, u: C64, p: &ModelParams) -> Result<RTensor> {
    let amb = r_fused_ambient(k, u, p)?;
    Ok(RTensor { k, u, m: restrict(k, &amb) })
}

/// Partial transpose in the first factor of `C^d ⊗ C^d`.
pub fn partial_transpose_1(m: &CMat, d: usize) -> CMat {
    let mut out = CMat::zeros(d * d, d * d);
    for i1 in 0..d {
        for i2 in 0..d {
            for j1 in 0..d {
                for j2 in 0..d {
                    out[(j1 * d + i2, i1 * d + j2)] = m[(i1 * d + i2, j1 * d + j2)];
                }
            }
        }
    }
    out
}

/// The two sides of the crossing relation at `u`: `(P R(u) P)^{t1}` and `R(-u-1)`.
fn crossing_pair(k: usize, u: C64, p: &ModelParams) -> Result<(CMat, CMat)> {
    let d = k + 1;
    let pk = permutation(d);
    let r = r_fused(k, u, p)?;
    let a = partial_transpose_1(&(&(&pk * &r.m) * &pk), d);
    let b = r_fused(k, -u - 1.0, p)?.m;
    Ok((a, b))
}

/// Sign `s` in `(P R(u) P)^{t1} (Q ⊗ 1) = s (Q ⊗ 1) R(-u-1)`; it equals `(-1)^k`.
pub fn crossing_sign(k: usize) -> f64 {
    if k.is_multiple_of(2) { 1.0 } else { -1.0 }
}

/// Crossing matrix and how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    pub k: usize,
    pub m: CMat,
    /// Factor applied to the raw solution to reach the stored normalization.
    pub scale: C64,
    /// Residual of the defining linear system at the solve points.
    pub solve_residual: f64,
}

/// Max entry of `(Q ⊗ 1) R(-u-1) - s (P R(u) P)^{t1} (Q ⊗ 1)`.
pub fn crossing_residual(k: usize, q: &CMat, u: C64, p: &ModelParams) -> Result<f64> {
    let (a, b) = crossing_pair(k, u, p)?;
    let qe = q.kron(&CMat::identity(k + 1));
    let lhs = &qe * &b;
    let rhs = (&a * &qe).scale(C64::new(crossing_sign(k), 0.0));
    Ok(lhs.max_diff(&rhs))
}

/// Solves the crossing relation for `Q` by stacking it at each `u` in `us`.
///
/// The result is scaled so its largest-modulus entry is `1`.
pub fn q_cross_solve(k: usize, us: &[C64], p: &ModelParams) -> Result<QMatrix> {
    let d = k + 1;
    let dd = d * d;
    let s = C64::new(crossing_sign(k), 0.0);
    let eye = CMat::identity(d);
    let mut blocks = Vec::new();
    for &u in us {
        blocks.push(crossing_pair(k, u, p)?);
    }
    let nrows = us.len() * dd * dd;
    let mut sys = CMat::zeros(nrows, dd);
    for q in 0..dd {
        let mut e = CMat::zeros(d, d);
        e[(q / d, q % d)] = C64::new(1.0, 0.0);
        let ee = e.kron(&eye);
        for (bi, (a, b)) in blocks.iter().enumerate() {
            let diff = &(&ee * b) - &(a * &ee).scale(s);
            for (idx, v) in diff.data.iter().enumerate() {
                sys[(bi * dd * dd + idx, q)] = *v;
            }
        }
    }
    let (v, res) = null_vector(&sys)?;
    let big = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).ok_or(Error::Capacity)?;
    let scale = C64::new(1.0, 0.0) / big;
    let m = CMat::from_rows(d, d, v.iter().map(|z| z * scale).collect());
    Ok(QMatrix { k, m, scale, solve_residual: res })
}

/// The crossing matrix: `σ^y` for `k = 1`, the theta-ratio form for `k = 2`,
/// a numerical solve for `k >= 3`.
pub fn q_cross_matrix(k: usize, p: &ModelParams) -> Result<QMatrix> {
    let z = C64::new(0.0, 0.0);
    match k {
        0 => Err(Error::Domain("level must be positive")),
        1 => {
            let m = CMat::from_rows(2, 2, vec![z, C64::new(0.0, -1.0), C64::new(0.0, 1.0), z]);
            Ok(QMatrix { k, m, scale: C64::new(1.0, 0.0), solve_residual: 0.0 })
        }
        2 => {
            let t = p.tau;
            let a = C64::new(1.0 / p.r, 0.0);
            let th = |i: u8, v: C64| theta_jacobi(i, v, t);
            let xx = -th(0, z)? * th(3, a)? / (th(0, a)? * th(3, z)?);
            let yy = -th(2, z)? * th(3, a)? / (th(2, a)? * th(3, z)?);
            let one = C64::new(1.0, 0.0);
            let m = CMat::from_rows(3, 3, vec![one + yy, z, one - yy, z, xx, z, one - yy, z, one + yy]);
            Ok(QMatrix { k, m: m.scale(C64::new(0.5, 0.0)), scale: C64::new(1.0, 0.0), solve_residual: 0.0 })
        }
        _ => {
            let q = q_cross_solve(k, &[C64::new(-0.3, 0.0), C64::new(-0.7, 0.0)], p)?;
            let check = crossing_residual(k, &q.m, C64::new(-0.45, 0.0), p)?;
            if check > 1e-8 {
                return Err(Error::NoSolution { residual: check });
            }
            Ok(q)
        }
    }
}

/// Max entry of `R12 R13 R23 - R23 R13 R12` on `V^{(k)⊗3}`.
pub fn ybe_residual(k: usize, u1: C64, u2: C64, u3: C64, p: &ModelParams) -> Result<f64> {
    let d = k + 1;
    let r12 = embed_pair(&r_fused(k, u1 - u2, p)?.m, d, 0, 1, 3);
    let r13 = embed_pair(&r_fused(k, u1 - u3, p)?.m, d, 0, 2, 3);
    let r23 = embed_pair(&r_fused(k, u2 - u3, p)?.m, d, 1, 2, 3);
    let lhs = &(&r12 * &r13) * &r23;
    let rhs = &(&r23 * &r13) * &r12;
    Ok(lhs.max_diff(&rhs))
}

/// Max entry of `R(u) P R(-u) P - I`.
pub fn unitarity_residual(k: usize, u: C64, p: &ModelParams) -> Result<f64> {
    let d = k + 1;
    let pk = permutation(d);
    let a = r_fused(k, u, p)?.m;
    let b = r_fused(k, -u, p)?.m;
    let prod = &(&(&a * &pk) * &b) * &pk;
    Ok(prod.max_diff(&CMat::identity(d * d)))
}

/// Max entry of `R^{(k,k)} Π - R^{(k,k)}` for either projector, in ambient space.
pub fn projector_absorption(k: usize, u: C64, p: &ModelParams) -> Result<f64> {
    let amb = r_fused_ambient(k, u, p)?;
    let sym = symmetrizer(k);
    let eye = CMat::identity(1 << k);
    let r1 = &amb * &sym.kron(&eye);
    let r2 = &amb * &eye.kron(&sym);
    Ok(r1.max_diff(&amb).max(r2.max_diff(&amb)))
}

/// One inequality `greater > lesser` in the ground-state analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub name: &'static str,
    pub ell: usize,
    pub greater: f64,
    pub lesser: f64,
}

impl Comparison {
    pub fn holds(&self) -> bool {
        self.greater > self.lesser
    }
}

/// Ground-state weight comparisons in the principal regime `-1 < u < 0`.
///
/// For `k = 1` these are the sign and size relations among `a, b, c, d`. For
/// `k >= 2` each spin `ε = k - 2ℓ != 0` compares the exchange entry
/// `R[(-ε, ε), (ε, -ε)]` against the transmission entry `R[(ε, -ε), (ε, -ε)]`,
/// both in modulus, which is independent of how the `v^{(k)}_ε` are scaled.
pub fn principal_regime_dominance(k: usize, u: f64, p: &ModelParams) -> Result<Vec<Comparison>> {
    if !(u > -1.0 && u < 0.0) {
        return Err(Error::Domain("principal regime needs -1 < u < 0"));
    }
    let uc = C64::new(u, 0.0);
    if k == 1 {
        let [a, b, c, d] = abcd(uc, p)?;
        let (a, b, c, d) = (a.re, b.re, c.re, d.re);
        return Ok(vec![
            Comparison { name: "c > a", ell: 0, greater: c, lesser: a },
            Comparison { name: "a > 0", ell: 0, greater: a, lesser: 0.0 },
            Comparison { name: "0 > b", ell: 0, greater: 0.0, lesser: b },
            Comparison { name: "d > 0", ell: 0, greater: d, lesser: 0.0 },
            Comparison { name: "c > |b|", ell: 0, greater: c, lesser: b.abs() },
            Comparison { name: "c > d", ell: 0, greater: c, lesser: d },
        ]);
    }
    let t = r_fused(k, uc, p)?;
    let mut out = Vec::new();
    for ell in 0..=k {
        let e = k as i32 - 2 * ell as i32;
        if e == 0 {
            continue;
        }
        let ie = ell;
        let im = spin_index(k, -e).ok_or(Error::Inadmissible)?;
        out.push(Comparison {
            name: "|exchange| > |transmission|",
            ell,
            greater: t.get(im, ie, ie, im).norm(),
            lesser: t.get(ie, im, ie, im).norm(),
        });
    }
    Ok(out)
}
