//! Polynomial reconstruction of `q^dim·M(q)` from exact matrices at many primes.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::BigRational;
use crate::exec::{par_map, ExecConfig};
use crate::ffield::is_prime;
use crate::ftsolver::{solve_ft_matrix, FTMatrix, LemmaReport, Provider};
use crate::poly::QPolynomial;
use crate::reps::RepKind;

/// `q^dim·M` with polynomial entries, valid for `q` in one congruence class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyMatrix {
    pub rep: RepKind,
    pub class: u64,
    pub entries: Vec<Vec<QPolynomial>>,
}

impl PolyMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &QPolynomial {
        &self.entries[i][j]
    }

    /// Exact `q^dim·M(q)` entries.
    pub fn eval(&self, q: u64) -> Vec<Vec<BigRational>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|p| p.eval_int(q as i64)).collect())
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        self.entries
            .iter()
            .flatten()
            .filter_map(QPolynomial::degree)
            .max()
            .unwrap_or(0)
    }
}

/// One entry where two polynomial matrices disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryDiff {
    pub row: usize,
    pub col: usize,
    pub row_label: String,
    pub col_label: String,
    pub got: QPolynomial,
    pub expected: QPolynomial,
}

/// First `n` valid primes of the rep in congruence class `class`.
pub fn sample_primes(kind: RepKind, class: u64, n: usize) -> Vec<u64> {
    (3u64..)
        .filter(|&p| is_prime(p) && kind.is_valid_prime(p) && kind.class_of(p) == class)
        .take(n)
        .collect()
}

/// Interpolates from sampled matrices; the last sample is the holdout.
pub fn interpolate_samples(kind: RepKind, class: u64, samples: &[FTMatrix]) -> Result<PolyMatrix> {
    let d = kind.dim();
    if samples.len() < d + 2 {
        return Err(Error::InvalidArgument(format!(
            "{kind} needs {} samples, got {}",
            d + 2,
            samples.len()
        )));
    }
    if let Some(bad) = samples.iter().find(|m| m.rep != kind || kind.class_of(m.q) != class) {
        return Err(Error::InvalidArgument(format!(
            "sample at q={} is not in class {class} of {kind}",
            bad.q
        )));
    }
    let scaled: Vec<_> = samples.iter().map(FTMatrix::scaled).collect();
    let (fit, holdout) = scaled.split_at(samples.len() - 1);
    let r = kind.descriptor().orbit_count();
    let mut entries = vec![vec![QPolynomial::zero(); r]; r];
    for i in 0..r {
        for j in 0..r {
            let pts: Vec<(BigRational, BigRational)> = fit
                .iter()
                .zip(samples)
                .map(|(m, s)| (BigRational::from_integer(s.q.into()), m[(i, j)].clone()))
                .collect();
            let p = QPolynomial::interpolate(&pts);
            let q_hold = samples[samples.len() - 1].q;
            if p.degree().unwrap_or(0) > d || p.eval_int(q_hold as i64) != holdout[0][(i, j)] {
                return Err(Error::DegreeBound {
                    prime: q_hold,
                    row: i,
                    col: j,
                });
            }
            entries[i][j] = p;
        }
    }
    Ok(PolyMatrix {
        rep: kind,
        class,
        entries,
    })
}

/// Reconstructs every congruence class of `q^dim·M` from the closed-form
/// solver at the first `dim+2` valid primes per class.
pub fn interpolate(kind: RepKind, exec: &ExecConfig) -> Result<Vec<PolyMatrix>> {
    kind.classes()
        .iter()
        .map(|&class| {
            let primes = sample_primes(kind, class, kind.dim() + 2);
            interpolate_primes(kind, class, &primes, exec)
        })
        .collect()
}

/// Same as [`interpolate`] with explicit primes; the last one is held out.
pub fn interpolate_primes(kind: RepKind, class: u64, primes: &[u64], exec: &ExecConfig) -> Result<PolyMatrix> {
    let samples = par_map(exec, primes, |&q| solve_ft_matrix(kind, q, &Provider::Formula))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    interpolate_samples(kind, class, &samples)
}

/// Entrywise differences, labelled by orbit.
pub fn compare(got: &PolyMatrix, expected: &PolyMatrix) -> Vec<EntryDiff> {
    let labels = &got.rep.descriptor().labels;
    let mut out = Vec::new();
    for (i, (ra, rb)) in got.entries.iter().zip(&expected.entries).enumerate() {
        for (j, (a, b)) in ra.iter().zip(rb).enumerate() {
            if a != b {
                out.push(EntryDiff {
                    row: i,
                    col: j,
                    row_label: labels[i].to_string(),
                    col_label: labels[j].to_string(),
                    got: a.clone(),
                    expected: b.clone(),
                });
            }
        }
    }
    out
}

/// Compares with the transcribed theorem matrix of the same class.
pub fn compare_paper(pm: &PolyMatrix) -> Result<Vec<EntryDiff>> {
    let expected = crate::paperdata::expected_matrix(pm.rep, pm.class)?;
    Ok(compare(pm, &expected))
}

/// `S(q)·M(q)` symmetric and `(q^dim M)² = q^dim·I` as polynomial identities.
pub fn verify_poly_lemma(pm: &PolyMatrix) -> LemmaReport {
    let sizes = &pm.rep.descriptor().sizes;
    let r = pm.size();
    let symmetric_ok = sizes.len() == r
        && (0..r).all(|i| (0..r).all(|j| &sizes[i] * &pm.entries[i][j] == &sizes[j] * &pm.entries[j][i]));
    let qd = QPolynomial::q().pow(pm.rep.dim() as u32);
    let involution_ok = (0..r).all(|i| {
        (0..r).all(|j| {
            let s = (0..r).fold(QPolynomial::zero(), |acc, k| {
                &acc + &(&pm.entries[i][k] * &pm.entries[k][j])
            });
            s == if i == j { qd.clone() } else { QPolynomial::zero() }
        })
    });
    LemmaReport {
        symmetric_ok,
        involution_ok,
    }
}

/// Output formats for [`render`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Latex,
    Json,
    Csv,
}

/// `c·(q−1)^a q^b (q+1)^c φ₂^e` when the polynomial has that shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    pub coeff: BigRational,
    pub abc: [u32; 3],
    pub phi: u32,
}

fn strip(p: &mut QPolynomial, f: &QPolynomial) -> u32 {
    let mut k = 0;
    while let Some(next) = p.div_exact(f) {
        *p = next;
        k += 1;
    }
    k
}

/// Factors out `(q−1)`, `q`, `(q+1)` and `φ₂ = q²+q+1` completely.
pub fn factor(p: &QPolynomial) -> Option<Factored> {
    if p.is_zero() {
        return None;
    }
    let mut rest = p.clone();
    let a = strip(&mut rest, &QPolynomial::linear(1));
    let b = strip(&mut rest, &QPolynomial::q());
    let c = strip(&mut rest, &QPolynomial::linear(-1));
    let e = strip(&mut rest, &QPolynomial::phi2());
    rest.as_constant().map(|coeff| Factored {
        coeff,
        abc: [a, b, c],
        phi: e,
    })
}

fn latex_coeff(c: &BigRational, bare: bool) -> String {
    let sign = if c.is_negative() { "-" } else { "" };
    let a = c.abs();
    if a.is_one() && !bare {
        sign.to_string()
    } else if a.is_integer() {
        format!("{sign}{a}")
    } else {
        format!("{sign}\\tfrac{{{}}}{{{}}}", a.numer(), a.denom())
    }
}

/// Factored `[abc]φ₂` notation when available, otherwise the expanded form.
pub fn render_entry_latex(p: &QPolynomial) -> String {
    let Some(f) = factor(p) else { return latex_expanded(p) };
    let trivial = f.abc == [0, 0, 0] && f.phi == 0;
    let mut out = latex_coeff(&f.coeff, trivial);
    if f.abc != [0, 0, 0] {
        let _ = write!(out, "[{}{}{}]", f.abc[0], f.abc[1], f.abc[2]);
    }
    match f.phi {
        0 => {}
        1 => out.push_str("\\phi_2"),
        e => {
            let _ = write!(out, "\\phi_2^{{{e}}}");
        }
    }
    out
}

/// Plain-text factored form, e.g. `1/4[442]phi2`.
pub fn render_entry_text(p: &QPolynomial) -> String {
    let Some(f) = factor(p) else { return p.to_string() };
    let trivial = f.abc == [0, 0, 0] && f.phi == 0;
    let mut out = if f.coeff.is_one() && !trivial {
        String::new()
    } else if (-f.coeff.clone()).is_one() && !trivial {
        "-".into()
    } else {
        f.coeff.to_string()
    };
    if f.abc != [0, 0, 0] {
        let _ = write!(out, "[{}{}{}]", f.abc[0], f.abc[1], f.abc[2]);
    }
    match f.phi {
        0 => {}
        1 => out.push_str("phi2"),
        e => {
            let _ = write!(out, "phi2^{e}");
        }
    }
    out
}

fn latex_expanded(p: &QPolynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    // common denominator pulled in front
    let den = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let ints = p.scale(&BigRational::from_integer(den.clone()));
    let body = ints.to_string();
    if den.is_one() {
        body
    } else {
        format!("\\tfrac{{1}}{{{den}}}({body})")
    }
}

/// Deterministic rendering of a reconstructed matrix.
pub fn render(pm: &PolyMatrix, format: RenderFormat) -> String {
    let labels: Vec<String> = pm.rep.descriptor().labels.iter().map(|l| l.to_string()).collect();
    match format {
        RenderFormat::Json => serde_json::to_string_pretty(&serde_json::json!({
            "rep": pm.rep,
            "class": pm.class,
            "modulus": pm.rep.modulus(),
            "scale": "q^dim",
            "dim": pm.rep.dim(),
            "orbit_labels": labels,
            "entries": pm.entries,
        }))
        .expect("plain data serializes"),
        RenderFormat::Csv => {
            let mut out = String::from("row,col,polynomial\n");
            for (i, row) in pm.entries.iter().enumerate() {
                for (j, p) in row.iter().enumerate() {
                    let _ = writeln!(out, "\"{}\",\"{}\",\"{}\"", labels[i], labels[j], p.to_expr());
                }
            }
            out
        }
        RenderFormat::Latex => {
            let mut out = format!(
                "% {} (q = {} mod {}), [abc] = (q-1)^a q^b (q+1)^c, \\phi_2 = q^2+q+1\nq^{{{}}}M = \\begin{{bmatrix}}\n",
                pm.rep,
                pm.class,
                pm.rep.modulus(),
                pm.rep.dim()
            );
            for row in &pm.entries {
                let cells: Vec<String> = row.iter().map(render_entry_latex).collect();
                let _ = writeln!(out, "{} \\\\", cells.join(" & "));
            }
            out.push_str("\\end{bmatrix}");
            out
        }
    }
}
