use pvsft_core::exactla::{int, rat};
use pvsft_core::poly::{parse, parse_with, Env, QPolynomial};

#[test]
fn arithmetic() {
    let a = QPolynomial::linear(1);
    let b = QPolynomial::linear(-1);
    assert_eq!(&a * &b, QPolynomial::from_i64(&[-1, 0, 1]));
    assert_eq!((&a * &b).div_exact(&a), Some(b.clone()));
    assert_eq!(QPolynomial::q().div_exact(&a), None);
}

#[test]
fn parses_paper_style() {
    let p = parse("q(5+q)/6").unwrap();
    assert_eq!(p, QPolynomial::from_coeffs(vec![int(0), rat(5, 6), rat(1, 6)]));
    assert_eq!(parse("(q^2-1)(q^2-q)/6").unwrap().eval_int(5), int(80));
    assert_eq!(parse("-1/2p^4+1/2p^2").unwrap().eval_int(3), int(-36));
    assert_eq!(parse("1/24*p^12").unwrap().coeff(12), rat(1, 24));
    assert_eq!(parse("[111]").unwrap(), QPolynomial::from_i64(&[0, -1, 0, 1]));
    assert_eq!(parse("s(4,4,2,2)/24").unwrap().eval_int(3), int(11232));
    assert_eq!(parse("-q^2").unwrap().eval_int(3), int(-9));
    assert_eq!(parse("2^3").unwrap().eval_int(0), int(8));
}

#[test]
fn env_names() {
    let mut env = Env::new();
    env.insert("a_3".into(), parse("2q-1").unwrap());
    env.insert("a_7".into(), parse("3q+1").unwrap());
    env.insert("b_-2".into(), parse("q^2-2").unwrap());
    env.insert("phi_2".into(), QPolynomial::phi2());
    let v = parse_with("-[010]a_3a_7", &env).unwrap();
    assert_eq!(v, parse("-q(2q-1)(3q+1)").unwrap());
    assert_eq!(parse_with("-[030]b_{-2}", &env).unwrap(), parse("-q^5+2q^3").unwrap());
    assert_eq!(
        parse_with("1/2[112]phi_2", &env).unwrap(),
        parse("(q-1)q(q+1)^2(q^2+q+1)/2").unwrap()
    );
    assert!(parse_with("zz", &env).is_err());
}

#[test]
fn display_round_trip() {
    for src in ["0", "1", "-q - 1", "1/6*q^2 + 5/6*q", "q^12 - 3/2*q"] {
        let p = parse(src).unwrap();
        assert_eq!(parse(&p.to_string()).unwrap(), p);
    }
    assert_eq!(parse("q^3-q").unwrap().to_string(), "q^3 - q");
}

#[test]
fn interpolation_recovers_polynomial() {
    let target = parse("1/24q^6 - 3q^2 + 7").unwrap();
    let pts: Vec<_> = [3, 5, 7, 11, 13, 17, 19]
        .iter()
        .map(|&x| (int(x), target.eval_int(x)))
        .collect();
    assert_eq!(QPolynomial::interpolate(&pts), target);
}
