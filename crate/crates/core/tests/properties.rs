use bifset_core::critvals::{discriminant_sheet, global_critical_values};
use bifset_core::faces::classify_faces;
use bifset_core::nondegen::{check_nondegenerate, check_nondegenerate_numeric};
use bifset_core::numeric::{random_point, System};
use bifset_core::parse::parse_polynomial;
use bifset_core::poly::{default_var_names, rat, ratio, rat_to_f64, LaurentPoly};
use bifset_core::polytope::LatticePolytope;
use bifset_core::rational::{Coprimality, RationalFunction};
use bifset_core::report::{bifurcation_superset, AnalyzeOptions};
use bifset_core::upoly::UniPoly;
use bifset_core::values::Settings;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn poly_strategy(n: usize, max_exp: i64, max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), -9i64..=9, 1i64..=4), 1..=max_terms).prop_map(
        move |terms| {
            LaurentPoly::from_terms(n, terms.into_iter().map(|(e, a, b)| (e, ratio(a, b))))
        },
    )
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_exp: i64, terms: usize) -> LaurentPoly {
    LaurentPoly::from_terms(
        n,
        (0..terms).map(|_| {
            let e: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max_exp)).collect();
            let mut c = rng.gen_range(-5i64..=5);
            if c == 0 {
                c = 1;
            }
            (e, rat(c))
        }),
    )
}

fn point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn display_parses_back(p in poly_strategy(3, 4, 6)) {
        let names = default_var_names(3);
        let text = p.display_with(&names).to_string();
        prop_assert_eq!(parse_polynomial(&text, &names).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn derivative_is_linear_and_leibniz(a in poly_strategy(2, 4, 5), b in poly_strategy(2, 4, 5), j in 0usize..2) {
        let sum = &a + &b;
        prop_assert_eq!(sum.partial_derivative(j), &a.partial_derivative(j) + &b.partial_derivative(j));
        let prod = &a * &b;
        let leibniz = &(&a.partial_derivative(j) * &b) + &(&a * &b.partial_derivative(j));
        prop_assert_eq!(prod.partial_derivative(j), leibniz);
    }

    #[test]
    fn derivative_matches_finite_differences(p in poly_strategy(2, 4, 6), seed in 0u64..1000, j in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = point(&mut rng, 2);
        let h = 1e-6;
        let mut zp = z.clone();
        let mut zm = z.clone();
        zp[j] += h;
        zm[j] -= h;
        let fd = (p.evaluate(&zp).unwrap() - p.evaluate(&zm).unwrap()) / (2.0 * h);
        let d = p.partial_derivative(j).evaluate(&z).unwrap();
        let scale = p.partial_derivative(j).evaluate_abs(&z) + p.evaluate_abs(&z) + 1.0;
        prop_assert!((fd - d).norm() <= 1e-6 * scale, "{} vs {}", fd, d);
    }

    #[test]
    fn support_numbers_add_under_minkowski_sum(
        a in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..=8),
        b in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..=8),
        u in prop::collection::vec(-5i64..=5, 3),
    ) {
        let pa = LatticePolytope::from_points(3, &a);
        let pb = LatticePolytope::from_points(3, &b);
        let s = pa.minkowski_sum(&pb);
        let (da, fa) = pa.support(&u);
        let (db, fb) = pb.support(&u);
        let (ds, fs) = s.support(&u);
        prop_assert_eq!(ds, da + db);
        // The face in direction u is the sum of the faces.
        let sums: Vec<Vec<i64>> = pa
            .face_points(fa)
            .iter()
            .flat_map(|x| pb.face_points(fb).into_iter().map(move |y| x.add(y).into_vec()))
            .collect();
        let expect = LatticePolytope::from_points(3, &sums);
        let got: Vec<Vec<i64>> = s.face_points(fs).iter().map(|v| v.as_slice().to_vec()).collect();
        let want: Vec<Vec<i64>> = expect.vertices().iter().map(|v| v.as_slice().to_vec()).collect();
        prop_assert_eq!(got, want);
    }
}

/// `lc^(2d-1) Π_{i<j} (r_i - r_j)^2`, which equals `±Res(g, g')`.
fn brute_discriminant(g: &UniPoly) -> Complex64 {
    let d = g.deg();
    let roots = g.roots();
    // Multiplicity-free by construction of the instances below.
    assert_eq!(roots.len(), d);
    let mut acc = Complex64::new(rat_to_f64(&g.leading_coeff()), 0.0).powi(2 * d as i32 - 1);
    for i in 0..d {
        for j in i + 1..d {
            acc *= (roots[i].value - roots[j].value).powi(2);
        }
    }
    acc
}

#[test]
fn discriminant_sheet_matches_root_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    let names = default_var_names(2);
    while checked < 200 {
        let p = random_poly(&mut rng, 2, 3, 4);
        let q = random_poly(&mut rng, 2, 2, 3);
        let dx = (p.degree_in(0)).max(q.degree_in(0));
        if !(2..=5).contains(&dx) {
            continue;
        }
        let Ok(sheet) = discriminant_sheet(&p, &q, 0) else { continue };
        let mut ratios = Vec::new();
        for _ in 0..3 {
            let y0 = ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
            let t0 = ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
            let g = &p.substitute(1, &y0) - &q.substitute(1, &y0).scale(&t0);
            let g = UniPoly::from_laurent(&g, 0).unwrap();
            if g.deg() as i64 != dx || !g.is_squarefree() {
                continue;
            }
            let s = sheet.evaluate_rational(&[y0, t0]).unwrap();
            ratios.push(Complex64::new(rat_to_f64(&s), 0.0) / brute_discriminant(&g));
        }
        if ratios.len() < 2 {
            continue;
        }
        for r in &ratios[1..] {
            assert!(
                (r - ratios[0]).norm() <= 1e-6 * ratios[0].norm(),
                "P = {}, Q = {}: ratios {:?}",
                p.display_with(&names),
                q.display_with(&names),
                ratios
            );
        }
        checked += 1;
    }
}

#[test]
fn polynomial_critical_values_match_numeric_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let names = default_var_names(2);
    let settings = Settings::default();
    let mut checked = 0;
    while checked < 50 {
        let p = random_poly(&mut rng, 2, 4, 5);
        let Ok(f) = RationalFunction::new(p.clone(), LaurentPoly::one(2), &names) else { continue };
        let Ok(exact) = global_critical_values(&f, &settings) else { continue };
        if !exact.notes.is_empty() || exact.values.is_empty() {
            // Keep instances with a finite, nonempty critical set.
            continue;
        }
        let grad = [p.partial_derivative(0), p.partial_derivative(1)];
        // The absolute gradient test catches degenerate critical points such
        // as the origin of x^2*y + y^4, where relative residuals stay large.
        let sys = System::new(&grad);
        let mut srng = ChaCha8Rng::seed_from_u64(3);
        let mut numeric: Vec<Complex64> = Vec::new();
        for k in 0..1500 {
            // Starts at several scales so that far critical points are reached too.
            let r = [[1.0, 1.0], [6.0, 6.0], [30.0, 30.0], [50.0, 2.0], [2.0, 50.0]][k % 5];
            let z0: Vec<Complex64> = random_point(&mut srng, 2).into_iter().zip(r).map(|(c, r)| c * r).collect();
            let z = sys.polish(&z0, 200);
            let g = sys.residual(&z).iter().map(|c| c.norm()).fold(0.0, f64::max);
            let scale = grad.iter().map(|d| d.evaluate_abs(&z)).fold(1.0, f64::max);
            if z.iter().all(|c| c.is_finite()) && (g < 1e-9 || g < 1e-12 * scale) {
                numeric.push(p.evaluate(&z).unwrap());
            }
        }
        for z in &numeric {
            assert!(
                exact.contains(*z, 1e-6 * (1.0 + z.norm())),
                "P = {}: numeric value {z} missing from {:?}",
                p.display_with(&names),
                exact.values
            );
        }
        for v in &exact.values {
            assert!(
                numeric.iter().any(|z| (z - v.value).norm() <= 1e-6 * (1.0 + z.norm())),
                "P = {}: exact value {} not found numerically",
                p.display_with(&names),
                v.value
            );
        }
        checked += 1;
    }
}

#[test]
fn numeric_non_degeneracy_refutations_are_exact_refutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let names = default_var_names(2);
    let settings = Settings { starts: 24, ..Default::default() };
    let mut checked = 0;
    let mut planted = 0;
    while checked < 100 {
        // Every fourth instance plants a squared binomial on an outer edge.
        let p = if checked % 4 == 0 {
            let a = rng.gen_range(1..=3);
            let c = rng.gen_range(1..=4);
            let edge = parse_polynomial(&format!("x^{a} - {c}*y^{a}"), &names).unwrap();
            &(&edge * &edge) + &random_poly(&mut rng, 2, a, 2).truncate(|e| e.total_degree() < 2 * a)
        } else {
            random_poly(&mut rng, 2, 3, 4)
        };
        let q = random_poly(&mut rng, 2, 2, 3);
        let Ok(f) = RationalFunction::new(p, q, &names) else { continue };
        if *f.coprimality() != Coprimality::Verified || f.p().is_zero() {
            continue;
        }
        let a = classify_faces(&f).unwrap();
        let exact = check_nondegenerate(&f, &a, &settings).unwrap();
        let numeric = check_nondegenerate_numeric(&f, &a, &settings).unwrap();
        for (e, n) in exact.faces.iter().zip(&numeric.faces) {
            assert_eq!(e.face, n.face);
            if n.verdict.is_refuted() {
                assert!(e.verdict.is_refuted(), "{}: face {} refuted numerically only", f.display(), e.face);
            }
            if e.verdict.is_refuted() {
                planted += 1;
            }
        }
        checked += 1;
    }
    assert!(planted > 0);
}

#[test]
fn analysis_is_deterministic() {
    for s in ["(x^2+y)/(x+y)", "x + x^2*y", "(1 + x^2*y^3 + x^5*y^3)/(1 + x^2*y^3 + x^4*y)"] {
        let f = RationalFunction::parse(s, &default_var_names(2)).unwrap();
        let a = bifurcation_superset(&f, &AnalyzeOptions::default()).unwrap().to_json();
        let b = bifurcation_superset(&f, &AnalyzeOptions::default()).unwrap().to_json();
        assert_eq!(a, b);
    }
}
