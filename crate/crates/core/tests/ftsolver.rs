use num_rational::BigRational;
use pvsft_core::census::{oracle_ft_matrix, CensusConfig, SubspaceSpec};
use pvsft_core::exactla::{rat, RationalMatrix};
use pvsft_core::ftsolver::{
    delta_check, ft_apply, phip_expected, phip_vector, q_pow, quadratic_twist_check, quadratic_twist_pointwise,
    solve_ft_matrix, subspace_identity_check, sym22_remark_check, verify_lemma, FTMatrix, OrbitFunction, Provider,
};
use pvsft_core::reps::{RepKind, Space};

fn formula(kind: RepKind, q: u64) -> FTMatrix {
    solve_ft_matrix(kind, q, &Provider::Formula).unwrap()
}

#[test]
fn sym22_at_3() {
    let m = formula(RepKind::Sym22, 3);
    let expected =
        RationalMatrix::from_i64(&[&[1, 8, 12, 6], &[1, -1, 3, -3], &[1, 2, -3, 0], &[1, -4, 0, 3]]).scale(&rat(1, 27));
    assert_eq!(m.matrix, expected);
}

#[test]
fn sym32_sign_classes() {
    // (111),(111) entry of q^4 M is q(5 ± q)/6
    for q in [7u64, 13, 5, 11] {
        let m = formula(RepKind::Sym32, q);
        let s = m.scaled();
        let sign = if q % 3 == 1 { 1 } else { -1 };
        let qi = q as i64;
        assert_eq!(s[(3, 3)], rat(qi * (5 + sign * qi), 6), "q={q}");
        assert!(quadratic_twist_check(&m).unwrap());
    }
}

#[test]
fn providers_agree_with_oracle() {
    for kind in [RepKind::Sym22, RepKind::Sym23, RepKind::Pair22] {
        for q in [3u64, 5] {
            let f = formula(kind, q);
            let e = solve_ft_matrix(kind, q, &Provider::Enumeration(CensusConfig::default())).unwrap();
            assert_eq!(f, e, "{kind} q={q}");
            let s = Space::new(kind, q).unwrap();
            assert_eq!(
                f.matrix,
                oracle_ft_matrix(&s, &CensusConfig::default()).unwrap(),
                "{kind} q={q}"
            );
        }
    }
    let f = formula(RepKind::Sym32, 5);
    let s = Space::new(RepKind::Sym32, 5).unwrap();
    assert_eq!(f.matrix, oracle_ft_matrix(&s, &CensusConfig::default()).unwrap());
}

#[test]
fn lemma_holds_for_every_rep() {
    for kind in RepKind::ALL {
        for q in [3u64, 5, 7, 11, 13, 9, 25] {
            if solve_ft_matrix(kind, q, &Provider::Formula).is_err() {
                assert!(q % 3 == 0 && kind == RepKind::Sym32);
                continue;
            }
            let m = formula(kind, q);
            let r = verify_lemma(&m);
            assert!(r.ok(), "{kind} q={q}: {r:?}");
            assert!(delta_check(&m).unwrap());
            assert!(m.denominators_ok(), "{kind} q={q}");
            let s = m.scaled();
            for (j, size) in m.orbit_sizes().iter().enumerate() {
                assert_eq!(&s[(0, j)], size);
                assert_eq!(s[(j, 0)], rat(1, 1));
            }
        }
    }
}

#[test]
fn lemma_detects_perturbation() {
    let mut m = formula(RepKind::Sym23, 5);
    let bump = q_pow(5, -6);
    let mut rows = m.matrix.to_rows();
    rows[1][2] += bump;
    m.matrix = RationalMatrix::from_rows(rows).unwrap();
    let r = verify_lemma(&m);
    assert!(!r.symmetric_ok);
    assert!(!r.involution_ok);
}

#[test]
fn lemma_checks_are_independent() {
    // diagonal matrices pass the symmetry check whatever their scale
    let fake = FTMatrix {
        rep: RepKind::Sym22,
        q: 3,
        matrix: RationalMatrix::identity(4).scale(&q_pow(3, -1)),
    };
    let r = verify_lemma(&fake);
    assert!(!r.involution_ok);
    assert!(r.symmetric_ok);
    // 9^{-3/2} = 1/27 squares to 9^{-3}
    let q = 9u64;
    let id = FTMatrix {
        rep: RepKind::Sym22,
        q,
        matrix: RationalMatrix::identity(4).scale(&rat(1, 27)),
    };
    let r = verify_lemma(&id);
    assert!(r.involution_ok);
    assert!(r.symmetric_ok);
}

#[test]
fn psi_binary() {
    for q in [5u64, 7, 11] {
        let m = formula(RepKind::Sym32, q);
        let psi = OrbitFunction::from_i64(RepKind::Sym32, &[1, 1, 1, 0, 0, 0]).unwrap();
        let out = ft_apply(&m, &psi).unwrap();
        let a = q_pow(q, -1) + q_pow(q, -2) - q_pow(q, -3);
        let b = q_pow(q, -2) - q_pow(q, -3);
        let c = -q_pow(q, -3);
        assert_eq!(out.coeffs, vec![a, b.clone(), b, c.clone(), c.clone(), c]);
        assert_eq!(ft_apply(&m, &phip_vector(q)).unwrap(), phip_expected(q));
    }
}

#[test]
fn indicator_of_zero_is_constant_column() {
    let m = formula(RepKind::Pair22, 7);
    let out = ft_apply(&m, &OrbitFunction::indicator(RepKind::Pair22, 0)).unwrap();
    assert!(out.coeffs.iter().all(|c| *c == q_pow(7, -6)));
    let wrong = OrbitFunction::ones(RepKind::Sym22);
    assert!(ft_apply(&m, &wrong).is_err());
}

#[test]
fn sym22_remark() {
    for q in [3u64, 5, 7, 9] {
        assert!(sym22_remark_check(&formula(RepKind::Sym22, q)).unwrap());
    }
}

#[test]
fn twist_pointwise_by_character_sums() {
    assert!(quadratic_twist_pointwise(5).unwrap());
    assert!(quadratic_twist_pointwise(7).unwrap());
}

#[test]
fn subspace_identity_trivial_cases() {
    let cfg = CensusConfig::default();
    for kind in [RepKind::Sym22, RepKind::Sym23, RepKind::Pair22] {
        let m = formula(kind, 3);
        let s = Space::new(kind, 3).unwrap();
        let zero = SubspaceSpec::Mask(vec![false; kind.dim()]);
        assert!(subspace_identity_check(&s, &zero, &m, &cfg).unwrap());
        assert!(subspace_identity_check(&s, &SubspaceSpec::full(kind), &m, &cfg).unwrap());
    }
}

#[test]
fn json_round_trip() {
    let m = formula(RepKind::Sym32, 7);
    let text = m.to_json();
    let back = FTMatrix::from_json(&text).unwrap();
    assert_eq!(back, m);
    assert_eq!(back.to_json(), text);
    assert!(text.contains("\"scale\": \"q^dim\""));
    assert!(FTMatrix::from_json("{}").is_err());
    let csv = m.to_csv();
    assert_eq!(csv.lines().count(), 37);
    assert!(m.to_latex().starts_with("q^{-4}\\begin{pmatrix}"));
    assert!(m.to_pretty().contains("(21)"));
}

#[test]
fn rejects_bad_characteristic() {
    assert!(solve_ft_matrix(RepKind::Sym32, 3, &Provider::Formula).is_err());
    assert!(solve_ft_matrix(RepKind::Sym22, 4, &Provider::Formula).is_err());
    assert!(solve_ft_matrix(RepKind::Sym22, 15, &Provider::Formula).is_err());
    assert!(solve_ft_matrix(RepKind::Sym22, 9, &Provider::Enumeration(CensusConfig::default())).is_err());
}

#[test]
fn quartic_at_3_matches_oracle() {
    let f = formula(RepKind::Pair23, 3);
    let e = solve_ft_matrix(RepKind::Pair23, 3, &Provider::Enumeration(CensusConfig::default())).unwrap();
    assert_eq!(f, e);
    let s = Space::new(RepKind::Pair23, 3).unwrap();
    assert_eq!(f.matrix, oracle_ft_matrix(&s, &CensusConfig::default()).unwrap());
}

#[test]
fn rational_helpers() {
    assert_eq!(q_pow(3, -2), BigRational::new(1.into(), 9.into()));
    assert_eq!(q_pow(3, 0), rat(1, 1));
}
