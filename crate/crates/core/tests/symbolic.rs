use pvsft_core::exec::ExecConfig;
use pvsft_core::ftsolver::{solve_ft_matrix, Provider};
use pvsft_core::poly::parse;
use pvsft_core::reps::RepKind;
use pvsft_core::symbolic::{
    compare_paper, factor, interpolate, interpolate_samples, render, render_entry_latex, render_entry_text,
    sample_primes, verify_poly_lemma, RenderFormat,
};

#[test]
fn sample_primes_per_class() {
    assert_eq!(sample_primes(RepKind::Sym32, 1, 4), vec![7, 13, 19, 31]);
    assert_eq!(sample_primes(RepKind::Sym32, 2, 4), vec![5, 11, 17, 23]);
    assert_eq!(sample_primes(RepKind::Sym22, 0, 5), vec![3, 5, 7, 11, 13]);
}

#[test]
fn reconstruction_matches_theorems() {
    for kind in RepKind::ALL {
        let pms = interpolate(kind, &ExecConfig::default()).unwrap();
        assert_eq!(pms.len(), kind.classes().len());
        for pm in &pms {
            let diff = compare_paper(pm).unwrap();
            assert!(diff.is_empty(), "{kind} class {}: {diff:?}", pm.class);
            assert!(verify_poly_lemma(pm).ok());
            assert!(pm.max_degree() <= kind.dim());
            assert_eq!(pm.entries[0], kind.descriptor().sizes);
            // round trip at every sample prime
            for q in sample_primes(kind, pm.class, kind.dim() + 2) {
                let m = solve_ft_matrix(kind, q, &Provider::Formula).unwrap();
                let s = m.scaled();
                let ev = pm.eval(q);
                for (i, row) in ev.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        assert_eq!(*v, s[(i, j)]);
                    }
                }
            }
        }
    }
}

#[test]
fn sym32_entry_example() {
    let pms = interpolate(RepKind::Sym32, &ExecConfig::default()).unwrap();
    let c1 = pms.iter().find(|p| p.class == 1).unwrap();
    assert_eq!(*c1.entry(3, 3), parse("q(5+q)/6").unwrap());
    assert_eq!(*c1.entry(0, 0), parse("1").unwrap());
}

#[test]
fn corrupted_sample_is_caught() {
    let kind = RepKind::Sym22;
    let primes = sample_primes(kind, 0, kind.dim() + 2);
    let mut samples: Vec<_> = primes
        .iter()
        .map(|&q| solve_ft_matrix(kind, q, &Provider::Formula).unwrap())
        .collect();
    // corrupting the holdout trips the degree check
    let mut bad = samples.clone();
    let last = bad.last_mut().unwrap();
    let mut rows = last.matrix.to_rows();
    rows[2][1] += pvsft_core::exactla::rat(1, 1);
    last.matrix = pvsft_core::exactla::RationalMatrix::from_rows(rows).unwrap();
    assert!(interpolate_samples(kind, 0, &bad).is_err());
    // corrupting a fitted sample with an extra holdout-free fit shows up as a diff
    let mut rows = samples[1].matrix.to_rows();
    rows[2][1] += pvsft_core::exactla::rat(1, 1);
    samples[1].matrix = pvsft_core::exactla::RationalMatrix::from_rows(rows).unwrap();
    samples.pop();
    let extra = solve_ft_matrix(kind, 17, &Provider::Formula).unwrap();
    samples.push(extra.clone());
    samples.push(extra);
    // duplicate holdout: interpolation goes through but the result is wrong
    match interpolate_samples(kind, 0, &samples) {
        Err(_) => {}
        Ok(pm) => {
            let diff = compare_paper(&pm).unwrap();
            assert!(diff.iter().any(|d| d.row == 2 && d.col == 1));
        }
    }
    assert!(interpolate_samples(kind, 0, &samples[..3]).is_err());
}

#[test]
fn factored_rendering() {
    assert_eq!(render_entry_latex(&parse("1").unwrap()), "1");
    assert_eq!(render_entry_text(&parse("1").unwrap()), "1");
    assert_eq!(render_entry_text(&parse("q^3-q").unwrap()), "[111]");
    assert_eq!(render_entry_latex(&parse("q^3-q").unwrap()), "[111]");
    let e = parse("(q-1)^4 q^4 (q+1)^2 (q^2+q+1)/4").unwrap();
    assert_eq!(render_entry_text(&e), "1/4[442]phi2");
    assert_eq!(render_entry_latex(&e), "\\tfrac{1}{4}[442]\\phi_2");
    assert_eq!(render_entry_latex(&parse("-q^2+q").unwrap()), "-[110]");
    assert_eq!(render_entry_latex(&parse("0").unwrap()), "0");
    assert!(factor(&parse("q^2-q-1").unwrap()).is_none());
    assert_eq!(
        render_entry_text(&parse("q^2-q-1").unwrap()),
        parse("q^2-q-1").unwrap().to_string()
    );
}

#[test]
fn render_formats_are_deterministic() {
    let pm = &interpolate(RepKind::Sym22, &ExecConfig::default()).unwrap()[0];
    for f in [RenderFormat::Latex, RenderFormat::Json, RenderFormat::Csv] {
        assert_eq!(render(pm, f), render(pm, f));
    }
    let json = render(pm, RenderFormat::Json);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["entries"][3][1], "-q - 1");
    assert_eq!(render(pm, RenderFormat::Csv).lines().count(), 17);
    assert!(render(pm, RenderFormat::Latex).contains("\\begin{bmatrix}"));
}
