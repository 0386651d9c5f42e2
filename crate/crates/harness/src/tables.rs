//! Value tables for the `table` and `chars` subcommands.

use std::io::Write;

use fusion_core::characters::{string_prefactor, StringFunctions};
use fusion_core::face::{w_fused, HeightQuad};
use fusion_core::intertwiner::{psi_fused, Kind};
use fusion_core::lmatrix::l_def;
use fusion_core::vertex::r_fused;
use fusion_core::{Error, ModelParams, Result, C64};
use serde::Serialize;

/// One labelled complex entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub label: String,
    pub value: C64,
}

/// Twelve significant digits.
pub fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

fn spin(k: usize, i: usize) -> String {
    format!("{:+}", k as i32 - 2 * i as i32)
}

fn heights_label(h: &[f64]) -> String {
    h.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Entries of `R^{(k,k)}(u)` labelled `R[o1 o2 <- i1 i2]` by spin.
pub fn r_table(k: usize, u: C64, p: &ModelParams, include_zero: bool) -> Result<Vec<Row>> {
    let t = r_fused(k, u, p)?;
    let mut rows = Vec::new();
    for o1 in 0..=k {
        for o2 in 0..=k {
            for i1 in 0..=k {
                for i2 in 0..=k {
                    let v = t.get(o1, o2, i1, i2);
                    if include_zero || v.norm() > 0.0 {
                        let label = format!("R[{} {} <- {} {}]", spin(k, o1), spin(k, o2), spin(k, i1), spin(k, i2));
                        rows.push(Row { label, value: v });
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// `W^{(k,k)}(a b; d c | u)`, heights in inline order `a, b, d, c`.
pub fn w_table(k: usize, h: [f64; 4], u: C64, p: &ModelParams) -> Result<Vec<Row>> {
    let v = w_fused(k, HeightQuad::new(h[0], h[1], h[2], h[3]), u, p)?;
    Ok(vec![Row { label: format!("W[{} {}; {} {}]", h[0], h[1], h[2], h[3]), value: v }])
}

/// Components `ψ^{(k)}_ε(u)^a_b`.
pub fn psi_table(k: usize, a: f64, b: f64, u: C64, p: &ModelParams) -> Result<Vec<Row>> {
    let v = psi_fused(Kind::Psi, k, u, a, b, p)?;
    Ok(v.components.iter().enumerate().map(|(i, z)| Row { label: format!("psi[{}] a={a} b={b}", spin(k, i)), value: *z }).collect())
}

/// `L^{(k)}(m0, mk; n0, nk | u)` by spin, then the total.
pub fn l_table(k: usize, h: [f64; 4], u: C64, p: &ModelParams) -> Result<Vec<Row>> {
    let e = l_def(k, h[0], h[1], h[2], h[3], u, p)?;
    let hl = heights_label(&h);
    let mut rows: Vec<Row> = e.by_epsilon.iter().enumerate().map(|(i, z)| Row { label: format!("L[{hl}][{}]", spin(k, i)), value: *z }).collect();
    rows.push(Row { label: format!("L[{hl}]"), value: e.value });
    Ok(rows)
}

/// Rejects tables whose entries are not finite (a pole at the requested point).
pub fn check_finite(rows: &[Row]) -> Result<()> {
    if rows.iter().any(|r| !(r.value.re.is_finite() && r.value.im.is_finite())) {
        return Err(Error::Singular("non-finite table entry"));
    }
    Ok(())
}

pub fn write_text<W: Write>(rows: &[Row], mut w: W) -> std::io::Result<()> {
    for r in rows {
        writeln!(w, "{} = ({}, {})", r.label, sig12(r.value.re), sig12(r.value.im))?;
    }
    Ok(())
}

pub fn write_csv<W: Write>(rows: &[Row], w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["label", "re", "im"])?;
    for r in rows {
        out.write_record([r.label.clone(), sig12(r.value.re), sig12(r.value.im)])?;
    }
    out.flush()?;
    Ok(())
}

/// One weight multiplicity together with the exponent it contributes in `q = x^4`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharRow {
    pub k: usize,
    pub ell: usize,
    #[serde(rename = "M")]
    pub m: i64,
    pub n: usize,
    pub mult: i64,
    pub exponent: String,
}

/// Multiplicities of `λ_M - nδ` in `V(λ_ℓ)` for `M ∈ (-k, k]` of the parity of `ℓ`, `n <= depth`.
pub fn char_rows(k: usize, ell: Option<usize>, depth: usize) -> Result<Vec<CharRow>> {
    if let Some(l) = ell {
        if l > k {
            return Err(Error::Domain("ell must lie in 0..=k"));
        }
    }
    let sf = StringFunctions::new(k, depth)?;
    let ells: Vec<usize> = match ell {
        Some(l) => vec![l],
        None => (0..=k).collect(),
    };
    let ki = k as i64;
    let mut rows = Vec::new();
    for l in ells {
        let t = sf.table(l);
        for m in (-ki + 1)..=ki {
            if (m - l as i64).rem_euclid(2) != 0 {
                continue;
            }
            let e = string_prefactor(k, l, m);
            for n in 0..=depth {
                rows.push(CharRow { k, ell: l, m, n, mult: t.get(m, n), exponent: sig12(e + n as f64) });
            }
        }
    }
    Ok(rows)
}

pub fn write_chars_csv<W: Write>(rows: &[CharRow], w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}
