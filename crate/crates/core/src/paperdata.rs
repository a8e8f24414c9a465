//! Transcribed theorem matrices and Fourier transform case lists.
//!
//! Each matrix is stored twice under `data/`: once as the typeset theorem
//! (with its `[abc]`, `φ₂` and helper shorthand) and once as the raw output
//! of a PARI/GP computation. Both are expanded into `q^dim·M`.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactla::{BigRational, RationalMatrix};
use crate::ftsolver::{q_pow, FTMatrix, OrbitFunction};
use crate::poly::{parse_with, Env, QPolynomial};
use crate::reps::RepKind;
use crate::symbolic::PolyMatrix;

const SYM32: &str = include_str!("../data/sym32.txt");
const SYM22: &str = include_str!("../data/sym22.txt");
const SYM23: &str = include_str!("../data/sym23.txt");
const PAIR22: &str = include_str!("../data/2sym22.txt");
const PAIR23: &str = include_str!("../data/2sym23_shorthand.txt");
const HELPERS: &str = include_str!("../data/helpers.txt");

const SYM32_Q1_PARI: &str = include_str!("../data/sym32_q1_pari.txt");
const SYM32_Q2_PARI: &str = include_str!("../data/sym32_q2_pari.txt");
const SYM22_PARI: &str = include_str!("../data/sym22_pari.txt");
const SYM23_PARI: &str = include_str!("../data/sym23_pari.txt");
const PAIR22_PARI: &str = include_str!("../data/2sym22_pari.txt");
const PAIR23_PARI: &str = include_str!("../data/2sym23_pari.txt");

fn data_lines(src: &str) -> impl Iterator<Item = &str> {
    src.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Names used by the shorthand: `a_i`, `b_i = q²+i`, `c_i`, `d_i`, `e_i`, `phi`.
pub fn helper_env() -> &'static Env {
    static ENV: OnceLock<Env> = OnceLock::new();
    ENV.get_or_init(|| {
        let mut env: Env = HashMap::new();
        for line in data_lines(HELPERS) {
            let (name, expr) = line.split_once('=').expect("name = expr");
            let p = parse_with(expr, &Env::new()).expect("helper polynomial");
            env.insert(name.trim().to_string(), p);
        }
        for i in [-3i64, -2, 1, 2, 3, 7, 23] {
            env.insert(format!("b_{i}"), &QPolynomial::q().pow(2) + &QPolynomial::from_int(i));
        }
        env.insert("phi".into(), QPolynomial::phi2());
        env
    })
}

fn matrix_from_rows(kind: RepKind, class: u64, src: &str, env: &Env) -> Result<PolyMatrix> {
    let r = kind.descriptor().orbit_count();
    let entries = data_lines(src)
        .map(|line| line.split('&').map(|e| parse_with(e, env)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if entries.len() != r || entries.iter().any(|row| row.len() != r) {
        return Err(Error::Inconsistent(format!("{kind}: transcription is not {r}×{r}")));
    }
    Ok(PolyMatrix {
        rep: kind,
        class,
        entries,
    })
}

fn matrix_from_pari(kind: RepKind, class: u64, src: &str) -> Result<PolyMatrix> {
    let body = data_lines(src).collect::<String>();
    let body = body.trim().trim_start_matches('[').trim_end_matches(']');
    let env = Env::new();
    let entries = body
        .split(';')
        .map(|row| row.split(',').map(|e| parse_with(e, &env)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let r = kind.descriptor().orbit_count();
    if entries.len() != r || entries.iter().any(|row| row.len() != r) {
        return Err(Error::Inconsistent(format!("{kind}: PARI dump is not {r}×{r}")));
    }
    Ok(PolyMatrix {
        rep: kind,
        class,
        entries,
    })
}

fn check_class(kind: RepKind, class: u64) -> Result<()> {
    if kind.classes().contains(&class) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{kind} has no class {class} mod {}",
            kind.modulus()
        )))
    }
}

/// The theorem matrix `q^dim·M` for `q` in `class`, shorthand expanded.
pub fn expected_matrix(kind: RepKind, class: u64) -> Result<PolyMatrix> {
    check_class(kind, class)?;
    match kind {
        RepKind::Sym32 => {
            let mut env = Env::new();
            let pm = if class == 1 { 1 } else { -1 };
            env.insert("pm".into(), QPolynomial::from_int(pm));
            matrix_from_rows(kind, class, SYM32, &env)
        }
        RepKind::Sym22 => matrix_from_rows(kind, class, SYM22, &Env::new()),
        RepKind::Sym23 => matrix_from_rows(kind, class, SYM23, &Env::new()),
        RepKind::Pair22 => matrix_from_rows(kind, class, PAIR22, &Env::new()),
        RepKind::Pair23 => matrix_from_rows(kind, class, PAIR23, helper_env()),
    }
}

/// The same matrix read from the PARI/GP output.
pub fn pari_matrix(kind: RepKind, class: u64) -> Result<PolyMatrix> {
    check_class(kind, class)?;
    let src = match (kind, class) {
        (RepKind::Sym32, 1) => SYM32_Q1_PARI,
        (RepKind::Sym32, _) => SYM32_Q2_PARI,
        (RepKind::Sym22, _) => SYM22_PARI,
        (RepKind::Sym23, _) => SYM23_PARI,
        (RepKind::Pair22, _) => PAIR22_PARI,
        (RepKind::Pair23, _) => PAIR23_PARI,
    };
    matrix_from_pari(kind, class, src)
}

/// The theorem matrix evaluated at `q` and divided by `q^dim`.
pub fn expected_ft_matrix(kind: RepKind, q: u64) -> Result<FTMatrix> {
    if q.is_multiple_of(2) || kind.bad_primes().iter().any(|&b| q.is_multiple_of(b)) {
        return Err(Error::BadPrime {
            rep: kind.to_string(),
            p: q,
        });
    }
    let pm = expected_matrix(kind, kind.class_of(q))?;
    let matrix = RationalMatrix::from_rows(pm.eval(q))?.scale(&q_pow(q, -(kind.dim() as i64)));
    Ok(FTMatrix { rep: kind, q, matrix })
}

/// Raw shorthand cells of the 20×20 matrix, for rendering next to the expansion.
pub fn pair23_shorthand() -> Vec<Vec<String>> {
    data_lines(PAIR23)
        .map(|l| l.split('&').map(|c| c.trim().to_string()).collect())
        .collect()
}

/// A function on orbits of the form `value_i = numerator_i(q) / q^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseList {
    pub rep: RepKind,
    pub denom_exp: u32,
    pub numerators: Vec<QPolynomial>,
}

impl CaseList {
    pub fn eval(&self, q: u64) -> OrbitFunction {
        let s = q_pow(q, -(self.denom_exp as i64));
        OrbitFunction {
            rep: self.rep,
            coeffs: self.numerators.iter().map(|p| p.eval_int(q as i64) * &s).collect(),
        }
    }
}

fn case_list(kind: RepKind, denom_exp: u32, cases: &[(&[&str], &str)]) -> CaseList {
    let d = kind.descriptor();
    let mut numerators = vec![None; d.orbit_count()];
    for (labels, expr) in cases {
        let p = parse_with(expr, &Env::new()).expect("case polynomial");
        for l in *labels {
            numerators[d.label_index(l).expect("orbit label")] = Some(p.clone());
        }
    }
    CaseList {
        rep: kind,
        denom_exp,
        numerators: numerators
            .into_iter()
            .map(|p| p.expect("every orbit covered"))
            .collect(),
    }
}

/// Transform of the indicator of the singular set (binary cubics or pairs
/// of ternary quadratic forms).
pub fn expected_psi_hat(kind: RepKind) -> Result<CaseList> {
    match kind {
        RepKind::Sym32 => Ok(case_list(
            kind,
            3,
            &[
                (&["(0)"], "q^2+q-1"),
                (&["(1^3)", "(1^2 1)"], "q-1"),
                (&["(111)", "(21)", "(3)"], "-1"),
            ],
        )),
        RepKind::Pair23 => Ok(case_list(
            kind,
            8,
            &[
                (&["(0)"], "q^7+2q^6-q^5-2q^4-q^3+2q^2+q-1"),
                (&["D1^2"], "q^5-q^4-2q^3+2q^2+q-1"),
                (&["D11"], "2q^4-5q^3+3q^2+q-1"),
                (&["Cs"], "q^4-3q^3+2q^2+q-1"),
                (&["D2", "Dns", "Cns", "Ts", "Ti"], "-q^3+q^2+q-1"),
                (&["1^2 1^2"], "-q^2+2q-1"),
                (&["2^2"], "q^2-1"),
                (&["1^4", "1^3 1", "1^2 11", "1^2 2"], "q-1"),
                (&["1111", "112", "22", "13", "4"], "-1"),
            ],
        )),
        _ => Err(Error::UnsupportedInvariant(
            "singular-set transform outside sym3-2 and 2sym2-3",
        )),
    }
}

/// Indicator of the singular orbits.
pub fn singular_indicator(kind: RepKind) -> Result<OrbitFunction> {
    let labels: &[&str] = match kind {
        RepKind::Sym32 => &["(0)", "(1^3)", "(1^2 1)"],
        RepKind::Pair23 => &[
            "(0)", "D1^2", "D11", "D2", "Dns", "Cs", "Cns", "Ts", "Ti", "1^4", "1^3 1", "1^2 1^2", "2^2", "1^2 11",
            "1^2 2",
        ],
        _ => return Err(Error::UnsupportedInvariant("singular set outside sym3-2 and 2sym2-3")),
    };
    OrbitFunction::indicator_of(kind, labels)
}

/// `Σ_x |Ψ̂_q(x)|` for pairs of ternary forms, from the case list and orbit sizes.
pub fn l1_norm_psi_hat(q: u64) -> BigRational {
    let kind = RepKind::Pair23;
    let values = expected_psi_hat(kind).expect("case list").eval(q);
    kind.descriptor()
        .sizes
        .iter()
        .zip(&values.coeffs)
        .map(|(s, v)| s.eval_int(q as i64) * v.abs())
        .fold(BigRational::zero(), |a, b| a + b)
}
