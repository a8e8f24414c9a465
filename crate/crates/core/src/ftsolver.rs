//! Exact Fourier transform matrices from subspace counts.
//!
//! For a subspace `W` with `u_i = |W∩O_i|/|O_i|` and
//! `v_k = q^{dim W − dim V}·|W⊥∩O_k|/|O_k|`, the transforms satisfy
//! `Σ_i u_i ê_i = Σ_k v_k e_k`. Stacking one row per member of a spanning
//! family gives `U·Mᵀ = V`, solved exactly. `M[i][j] = ê_j(y_i)` where `y_i`
//! is a point of the `i`-th orbit.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::census::{count_in_subspace, CensusConfig, SubspaceSpec};
use crate::counts::{count_table, spanning_family};
use crate::error::{Error, Result};
use crate::exactla::{orth_complement, solve_exact, BigRational, FpSubspace, RationalMatrix};
use crate::ffield::is_prime;
use crate::reps::{RepKind, Space};

/// Source of the subspace counts.
#[derive(Clone, Debug)]
pub enum Provider {
    /// Closed forms, any admissible `q`.
    Formula,
    /// Enumeration of the family members and their literal complements.
    Enumeration(CensusConfig),
}

/// `M(q)` for one representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FTMatrix {
    pub rep: RepKind,
    pub q: u64,
    pub matrix: RationalMatrix,
}

/// Function on `V` constant on orbits, in the indicator basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitFunction {
    pub rep: RepKind,
    pub coeffs: Vec<BigRational>,
}

impl OrbitFunction {
    pub fn new(rep: RepKind, coeffs: Vec<BigRational>) -> Result<Self> {
        let r = rep.descriptor().orbit_count();
        if coeffs.len() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                got: coeffs.len(),
            });
        }
        Ok(OrbitFunction { rep, coeffs })
    }

    pub fn from_i64(rep: RepKind, coeffs: &[i64]) -> Result<Self> {
        Self::new(
            rep,
            coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        )
    }

    pub fn indicator(rep: RepKind, orbit: usize) -> Self {
        let mut c = vec![BigRational::zero(); rep.descriptor().orbit_count()];
        c[orbit] = BigRational::one();
        OrbitFunction { rep, coeffs: c }
    }

    /// Indicator of the union of the named orbits.
    pub fn indicator_of(rep: RepKind, labels: &[&str]) -> Result<Self> {
        let d = rep.descriptor();
        let mut c = vec![BigRational::zero(); d.orbit_count()];
        for l in labels {
            c[d.label_index(l)?] += BigRational::one();
        }
        Ok(OrbitFunction { rep, coeffs: c })
    }

    pub fn ones(rep: RepKind) -> Self {
        OrbitFunction {
            rep,
            coeffs: vec![BigRational::one(); rep.descriptor().orbit_count()],
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        OrbitFunction {
            rep: self.rep,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }
}

/// Outcome of the two matrix identities `S·M = (S·M)ᵀ` and `M² = q^{-dim}·I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub symmetric_ok: bool,
    pub involution_ok: bool,
}

impl LemmaReport {
    pub fn ok(&self) -> bool {
        self.symmetric_ok && self.involution_ok
    }
}

/// `q^k` as a rational, negative `k` allowed.
pub fn q_pow(q: u64, k: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(q).pow(k.unsigned_abs() as u32));
    if k >= 0 {
        b
    } else {
        b.recip()
    }
}

/// Smallest prime dividing `q` if `q` is a prime power.
fn prime_power_base(q: u64) -> Option<u64> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    (r == 1 && is_prime(p)).then_some(p)
}

fn check_q(kind: RepKind, q: u64, formula: bool) -> Result<()> {
    if formula {
        let p = prime_power_base(q).ok_or(Error::NotPrime(q))?;
        if kind.bad_primes().contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "characteristic {p} is excluded for {kind}"
            )));
        }
        return Ok(());
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if !kind.is_valid_prime(q) {
        return Err(Error::InvalidArgument(format!("p = {q} is excluded for {kind}")));
    }
    Ok(())
}

fn sizes_at(kind: RepKind, q: u64) -> Vec<BigRational> {
    kind.descriptor().sizes.iter().map(|s| s.eval_int(q as i64)).collect()
}

fn ratio_row(counts: &[BigRational], sizes: &[BigRational], scale: &BigRational) -> Vec<BigRational> {
    counts.iter().zip(sizes).map(|(c, s)| c * scale / s).collect()
}

fn to_rationals(v: &[u64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

/// Enumerated `(|W∩O_i|, |W⊥∩O_i|, dim W)` for a coordinate mask.
fn enumerate_pair(
    space: &Space,
    mask: &[bool],
    cfg: &CensusConfig,
) -> Result<(Vec<BigRational>, Vec<BigRational>, usize)> {
    let w = FpSubspace::coordinate(space.field(), mask);
    let perp = orth_complement(&w, space.weights())?;
    let a = count_in_subspace(space, &SubspaceSpec::Basis(w.clone()), cfg)?;
    let b = count_in_subspace(space, &SubspaceSpec::Basis(perp), cfg)?;
    Ok((to_rationals(&a.counts), to_rationals(&b.counts), w.dim()))
}

/// Rows `(u_W, v_W)` for each family member.
fn family_rows(kind: RepKind, q: u64, provider: &Provider) -> Result<Vec<(Vec<BigRational>, Vec<BigRational>)>> {
    let d = kind.dim() as i64;
    let sizes = sizes_at(kind, q);
    let family = spanning_family(kind);
    let table = count_table(kind);
    let space = match provider {
        Provider::Formula => None,
        Provider::Enumeration(_) => Some(Space::new(kind, q)?),
    };
    family
        .members
        .iter()
        .map(|m| {
            let (cw, cperp, dim) = match (provider, &space) {
                (Provider::Enumeration(cfg), Some(s)) => enumerate_pair(s, &table.entry(&m.id)?.mask_bits(), cfg)?,
                _ => (table.evaluate(&m.id, q)?, table.evaluate(&m.dual, q)?, m.dim),
            };
            Ok((
                ratio_row(&cw, &sizes, &BigRational::one()),
                ratio_row(&cperp, &sizes, &q_pow(q, dim as i64 - d)),
            ))
        })
        .collect()
}

/// Random coordinate masks whose member and complement are both enumerable.
fn fallback_rows(
    kind: RepKind,
    q: u64,
    cfg: &CensusConfig,
    need: usize,
    existing: &mut Vec<(Vec<BigRational>, Vec<BigRational>)>,
) -> Result<()> {
    let space = Space::new(kind, q)?;
    let d = kind.dim();
    let sizes = sizes_at(kind, q);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(q ^ 0x5eed);
    let mut rank = RationalMatrix::from_rows(existing.iter().map(|r| r.0.clone()).collect())?.rank();
    for _ in 0..64 * d {
        if rank >= need {
            return Ok(());
        }
        let mask: Vec<bool> = (0..d).map(|_| rng.gen_bool(0.5)).collect();
        let Ok((cw, cperp, dim)) = enumerate_pair(&space, &mask, cfg) else {
            continue;
        };
        let row = (
            ratio_row(&cw, &sizes, &BigRational::one()),
            ratio_row(&cperp, &sizes, &q_pow(q, dim as i64 - d as i64)),
        );
        let mut trial: Vec<Vec<BigRational>> = existing.iter().map(|r| r.0.clone()).collect();
        trial.push(row.0.clone());
        let r = RationalMatrix::from_rows(trial)?.rank();
        if r > rank {
            rank = r;
            existing.push(row);
        }
    }
    if rank < need {
        return Err(Error::Singular { rank, size: need });
    }
    Ok(())
}

/// Greedy choice of `r` rows with independent `u` parts.
fn independent_rows(rows: &[(Vec<BigRational>, Vec<BigRational>)], r: usize) -> Result<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let mut trial: Vec<Vec<BigRational>> = chosen.iter().map(|&k| rows[k].0.clone()).collect();
        trial.push(rows[i].0.clone());
        if RationalMatrix::from_rows(trial)?.rank() == chosen.len() + 1 {
            chosen.push(i);
        }
        if chosen.len() == r {
            break;
        }
    }
    Ok(chosen)
}

/// Solves `U·Mᵀ = V` over the spanning family.
pub fn solve_ft_matrix(kind: RepKind, q: u64, provider: &Provider) -> Result<FTMatrix> {
    check_q(kind, q, matches!(provider, Provider::Formula))?;
    let r = kind.descriptor().orbit_count();
    let mut rows = family_rows(kind, q, provider)?;
    let u = RationalMatrix::from_rows(rows.iter().map(|x| x.0.clone()).collect())?;
    if u.rank() < r {
        log::warn!(
            "{kind} at q={q}: spanning family has rank {} < {r}; adding enumerated random subspaces",
            u.rank()
        );
        if !is_prime(q) {
            return Err(Error::Singular {
                rank: u.rank(),
                size: r,
            });
        }
        let cfg = match provider {
            Provider::Enumeration(c) => c.clone(),
            Provider::Formula => CensusConfig::default(),
        };
        fallback_rows(kind, q, &cfg, r, &mut rows)?;
    }
    let pick = independent_rows(&rows, r)?;
    if pick.len() < r {
        return Err(Error::Singular {
            rank: pick.len(),
            size: r,
        });
    }
    let u = RationalMatrix::from_rows(pick.iter().map(|&i| rows[i].0.clone()).collect())?;
    let v = RationalMatrix::from_rows(pick.iter().map(|&i| rows[i].1.clone()).collect())?;
    let mt = solve_exact(&u, &v)?;
    Ok(FTMatrix {
        rep: kind,
        q,
        matrix: mt.transpose(),
    })
}

/// Serialized form of an [`FTMatrix`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FTMatrixJson {
    pub rep: RepKind,
    pub q: u64,
    pub dim: usize,
    pub scale: String,
    pub orbit_labels: Vec<String>,
    pub orbit_sizes: Vec<String>,
    pub matrix_scaled: Vec<Vec<String>>,
}

fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|_| Error::Parse(format!("not a rational: '{s}'")))
}

impl FTMatrix {
    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.matrix[(i, j)]
    }

    /// `q^dim · M`.
    pub fn scaled(&self) -> RationalMatrix {
        self.matrix.scale(&q_pow(self.q, self.dim() as i64))
    }

    /// Entries of `q^dim·M` have denominators dividing 24.
    pub fn denominators_ok(&self) -> bool {
        let s = self.scaled();
        (0..s.rows()).all(|i| (0..s.cols()).all(|j| (BigInt::from(24) % s[(i, j)].denom()).is_zero()))
    }

    pub fn orbit_sizes(&self) -> Vec<BigRational> {
        sizes_at(self.rep, self.q)
    }

    pub fn to_json_struct(&self) -> FTMatrixJson {
        let s = self.scaled();
        FTMatrixJson {
            rep: self.rep,
            q: self.q,
            dim: self.dim(),
            scale: "q^dim".into(),
            orbit_labels: self.rep.descriptor().labels.iter().map(|l| l.to_string()).collect(),
            orbit_sizes: self.orbit_sizes().iter().map(|x| x.to_string()).collect(),
            matrix_scaled: (0..s.rows())
                .map(|i| (0..s.cols()).map(|j| s[(i, j)].to_string()).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_struct()).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: FTMatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_struct(&j)
    }

    pub fn from_json_struct(j: &FTMatrixJson) -> Result<Self> {
        if j.dim != j.rep.dim() || j.scale != "q^dim" {
            return Err(Error::Parse(format!("inconsistent header for {}", j.rep)));
        }
        let labels: Vec<String> = j.rep.descriptor().labels.iter().map(|l| l.to_string()).collect();
        if labels != j.orbit_labels {
            return Err(Error::Parse("orbit labels do not match the representation".into()));
        }
        let rows = j
            .matrix_scaled
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let m = RationalMatrix::from_rows(rows)?.scale(&q_pow(j.q, -(j.dim as i64)));
        let out = FTMatrix {
            rep: j.rep,
            q: j.q,
            matrix: m,
        };
        if out.size() != labels.len() || out.matrix.cols() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                got: out.size(),
            });
        }
        Ok(out)
    }

    /// `row,col,value` of `q^dim·M` with orbit labels.
    pub fn to_csv(&self) -> String {
        let labels = &self.rep.descriptor().labels;
        let s = self.scaled();
        let mut out = String::from("row,col,scaled_value\n");
        for (i, li) in labels.iter().enumerate() {
            for (j, lj) in labels.iter().enumerate() {
                let _ = writeln!(out, "\"{li}\",\"{lj}\",{}", s[(i, j)]);
            }
        }
        out
    }

    pub fn to_latex(&self) -> String {
        let s = self.scaled();
        let mut out = format!("q^{{-{}}}\\begin{{pmatrix}}\n", self.dim());
        for i in 0..s.rows() {
            let row: Vec<String> = (0..s.cols()).map(|j| latex_rational(&s[(i, j)])).collect();
            let _ = writeln!(out, "{} \\\\", row.join(" & "));
        }
        out.push_str("\\end{pmatrix}");
        out
    }

    /// Human-readable table of `q^dim·M`.
    pub fn to_pretty(&self) -> String {
        let labels: Vec<String> = self.rep.descriptor().labels.iter().map(|l| l.to_string()).collect();
        let s = self.scaled();
        let cells: Vec<Vec<String>> = (0..s.rows())
            .map(|i| (0..s.cols()).map(|j| s[(i, j)].to_string()).collect())
            .collect();
        let lw = labels.iter().map(String::len).max().unwrap_or(0);
        let cw = cells
            .iter()
            .flatten()
            .chain(&labels)
            .map(String::len)
            .max()
            .unwrap_or(1);
        let mut out = format!("{} at q = {}: M = q^-{} × \n", self.rep, self.q, self.dim());
        let _ = write!(out, "{:lw$}", "");
        for l in &labels {
            let _ = write!(out, " {l:>cw$}");
        }
        out.push('\n');
        for (l, row) in labels.iter().zip(&cells) {
            let _ = write!(out, "{l:lw$}");
            for c in row {
                let _ = write!(out, " {c:>cw$}");
            }
            out.push('\n');
        }
        out
    }
}

fn latex_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.to_string()
    } else {
        let sign = if x.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", x.numer().abs(), x.denom())
    }
}

/// Checks `S·M` symmetric and `M² = q^{-dim}·I`.
pub fn verify_lemma(m: &FTMatrix) -> LemmaReport {
    let r = m.size();
    let sizes = m.orbit_sizes();
    let symmetric_ok = sizes.len() == r
        && (0..r).all(|i| (0..r).all(|j| &sizes[i] * &m.matrix[(i, j)] == &sizes[j] * &m.matrix[(j, i)]));
    let target = RationalMatrix::identity(r).scale(&q_pow(m.q, -(m.dim() as i64)));
    let involution_ok = m.matrix.mul(&m.matrix).is_ok_and(|sq| sq == target);
    LemmaReport {
        symmetric_ok,
        involution_ok,
    }
}

/// Coefficients of `f̂` in the indicator basis: `M·f`.
pub fn ft_apply(m: &FTMatrix, f: &OrbitFunction) -> Result<OrbitFunction> {
    if f.rep != m.rep {
        return Err(Error::InvalidArgument(format!(
            "function on {} applied to {}",
            f.rep, m.rep
        )));
    }
    if f.coeffs.len() != m.matrix.cols() {
        return Err(Error::DimensionMismatch {
            expected: m.matrix.cols(),
            got: f.coeffs.len(),
        });
    }
    OrbitFunction::new(m.rep, m.matrix.mul_vec(&f.coeffs)?)
}

/// Both sides of `Σ_i u_i ê_i = (|W|/|V|) Σ_k (|W⊥∩O_k|/|O_k|) e_k`, counted
/// by enumeration.
pub fn subspace_identity_check(space: &Space, w: &SubspaceSpec, m: &FTMatrix, cfg: &CensusConfig) -> Result<bool> {
    if space.kind() != m.rep || space.p() != m.q {
        return Err(Error::InvalidArgument("space and matrix disagree".into()));
    }
    let w = w.to_subspace(space)?;
    let perp = orth_complement(&w, space.weights())?;
    let a = count_in_subspace(space, &SubspaceSpec::Basis(w.clone()), cfg)?;
    let b = count_in_subspace(space, &SubspaceSpec::Basis(perp), cfg)?;
    let sizes = m.orbit_sizes();
    let u = ratio_row(&to_rationals(&a.counts), &sizes, &BigRational::one());
    let v = ratio_row(
        &to_rationals(&b.counts),
        &sizes,
        &q_pow(m.q, w.dim() as i64 - m.dim() as i64),
    );
    Ok(m.matrix.mul_vec(&u)? == v)
}

/// `f̂` of the constant function is the indicator of `{0}`.
pub fn delta_check(m: &FTMatrix) -> Result<bool> {
    let out = ft_apply(m, &OrbitFunction::ones(m.rep))?;
    Ok(out == OrbitFunction::indicator(m.rep, 0))
}

/// Binary cubics: `ê₄ − ê₅ + ê₆ = ±q^{-2}(e₄ − e₅ + e₆)`, `+` iff `q ≡ 1 mod 3`.
pub fn quadratic_twist_check(m: &FTMatrix) -> Result<bool> {
    if m.rep != RepKind::Sym32 {
        return Err(Error::UnsupportedInvariant("quadratic twist outside binary cubics"));
    }
    let f = OrbitFunction::from_i64(m.rep, &[0, 0, 0, 1, -1, 1])?;
    let sign = if m.q % 3 == 1 { 1 } else { -1 };
    Ok(ft_apply(m, &f)? == f.scale(&(q_pow(m.q, -2) * BigRational::from_integer(sign.into()))))
}

/// Pointwise twist identity for binary cubics by direct character sums:
/// `q^{-4} Σ_x ψ(Disc x) ζ^{[x,y]} = q^{-2} ψ(−Disc(y)/27)` for every `y`.
///
/// With `N_t = Σ_{[x,y]=t} ψ(Disc x)` the left side is rational iff all
/// `N_t` with `t ≠ 0` agree, and then equals `(N_0 − N_1)/q⁴`.
pub fn quadratic_twist_pointwise(p: u64) -> Result<bool> {
    let space = Space::new(RepKind::Sym32, p)?;
    let f = space.field().clone();
    let total = p.pow(4);
    let points: Vec<Vec<u32>> = (0..total).map(|i| space.coords_of_index(i)).collect();
    let psi: Vec<i64> = points
        .iter()
        .map(|x| space.disc(x).map(|d| f.legendre_raw(d) as i64))
        .collect::<Result<_>>()?;
    let minus_inv27 = f.neg(f.inv_raw(f.reduce(27)));
    let q2 = (p * p) as i64;
    for y in &points {
        let mut n = vec![0i64; p as usize];
        for (x, &s) in points.iter().zip(&psi) {
            if s != 0 {
                n[space.bilinear(x, y)? as usize] += s;
            }
        }
        if n[1..].iter().any(|&t| t != n[1]) {
            return Ok(false);
        }
        let want = f.legendre_raw(f.mul(minus_inv27, space.disc(y)?)) as i64;
        if n[0] - n[1] != q2 * want {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `w_q = (q+1, 1, 2, 3, 1, 0)` counts the zeros of a binary cubic on `P¹`.
pub fn phip_vector(q: u64) -> OrbitFunction {
    let q = q as i64;
    OrbitFunction::from_i64(RepKind::Sym32, &[q + 1, 1, 2, 3, 1, 0]).expect("six orbits")
}

/// Expected `ŵ_q`: `1 + q^{-1}` at `0`, `q^{-1}` on the cube orbit, `0` elsewhere.
pub fn phip_expected(q: u64) -> OrbitFunction {
    let mut c = vec![BigRational::zero(); 6];
    c[0] = BigRational::one() + q_pow(q, -1);
    c[1] = q_pow(q, -1);
    OrbitFunction::new(RepKind::Sym32, c).expect("six orbits")
}

/// `M(e₃ − e₄) = (q^{-1} − q^{-2})(e₁ + e₂) − q^{-2}(e₃ + e₄)` for binary quadratics.
pub fn sym22_remark_check(m: &FTMatrix) -> Result<bool> {
    if m.rep != RepKind::Sym22 {
        return Err(Error::UnsupportedInvariant("remark identity outside binary quadratics"));
    }
    let f = OrbitFunction::from_i64(m.rep, &[0, 0, 1, -1])?;
    let a = q_pow(m.q, -1) - q_pow(m.q, -2);
    let b = -q_pow(m.q, -2);
    let want = OrbitFunction::new(m.rep, vec![a.clone(), a, b.clone(), b])?;
    Ok(ft_apply(m, &f)? == want)
}

/// Sum of `|O_i|·|f(O_i)|`.
pub fn l1_norm(m_rep: RepKind, q: u64, f: &OrbitFunction) -> BigRational {
    sizes_at(m_rep, q)
        .iter()
        .zip(&f.coeffs)
        .map(|(s, c)| s * c.abs())
        .fold(BigRational::zero(), |a, b| a + b)
}
