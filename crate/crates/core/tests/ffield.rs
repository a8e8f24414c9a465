use pvsft_core::ffield::PrimeField;
use pvsft_core::Error;

#[test]
fn inverses() {
    let f5 = PrimeField::new(5).unwrap();
    assert_eq!(f5.inv(f5.elem(2)).unwrap().value(), 3);
    let f7 = PrimeField::new(7).unwrap();
    assert_eq!(f7.inv(f7.elem(1)).unwrap().value(), 1);
    assert_eq!(f7.inv(f7.elem(4)).unwrap().value(), 2);
    assert!(matches!(f7.inv(f7.elem(0)), Err(Error::DivisionByZero)));
}

#[test]
fn rejects_bad_moduli() {
    assert!(PrimeField::new(2).is_err());
    assert!(PrimeField::new(9).is_err());
    assert!(PrimeField::new(1).is_err());
}

#[test]
fn legendre_values() {
    let f7 = PrimeField::new(7).unwrap();
    assert_eq!(f7.legendre(f7.elem(0)), 0);
    assert_eq!(f7.legendre(f7.elem(4)), 1);
    assert_eq!(f7.legendre(f7.elem(3)), -1);
}

#[test]
fn nonresidues() {
    for (p, l) in [(3, 2), (5, 2), (7, 3)] {
        assert_eq!(PrimeField::new(p).unwrap().smallest_nonresidue().value(), l);
    }
}

#[test]
fn irreducibles() {
    let f5 = PrimeField::new(5).unwrap();
    assert_eq!(f5.find_irreducible_monic(2).unwrap().coeffs, vec![2, 0, 1]);
    let f3 = PrimeField::new(3).unwrap();
    assert_eq!(f3.find_irreducible_monic(2).unwrap().coeffs, vec![1, 0, 1]);
    assert_eq!(f3.find_irreducible_monic(3).unwrap().coeffs, vec![1, 2, 0, 1]);
}

#[test]
fn projective_line_order() {
    let f3 = PrimeField::new(3).unwrap();
    let pts = f3.projective_points(2);
    assert_eq!(pts, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]]);
    assert_eq!(f3.projective_points(3).len(), 13);
    assert_eq!(PrimeField::new(7).unwrap().projective_points(2).len(), 8);
}
