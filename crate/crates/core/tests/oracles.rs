use nalgebra::DMatrix;
use openwar::numerics::{
    bernoulli_log_likelihood, logistic_fit, ols_fit, smooth_out_probability, Bandwidth, DesignMatrix,
    LogisticOptions, SeededRng,
};

fn random_design(rng: &mut SeededRng, n: usize, p: usize) -> (DesignMatrix<f64>, DMatrix<f64>) {
    let mut values = Vec::with_capacity(n * p);
    for _ in 0..n {
        for j in 0..p {
            values.push(if j == 0 { 1.0 } else { rng.normal(0.0, 1.0) });
        }
    }
    let names = (0..p).map(|j| format!("c{j}")).collect();
    let x = DesignMatrix::new(names, n, values.clone(), true).unwrap();
    (x, DMatrix::from_row_slice(n, p, &values))
}

#[test]
fn ols_matches_pseudo_inverse() {
    let mut rng = SeededRng::new(1);
    for _ in 0..100 {
        let p = 2 + rng.below(6);
        let n = p + 5 + rng.below(40);
        let (x, m) = random_design(&mut rng, n, p);
        let y: Vec<f64> = (0..n).map(|_| rng.normal(0.0, 2.0)).collect();
        let fit = ols_fit(&x, &y).unwrap();
        let beta = m.clone().pseudo_inverse(1e-12).unwrap() * DMatrix::from_column_slice(n, 1, &y);
        for j in 0..p {
            assert!((fit.coefficients[j] - beta[j]).abs() < 1e-8);
        }
        assert!(fit.residuals.iter().sum::<f64>().abs() < 1e-9);
    }
}

#[test]
fn collinear_columns_give_same_fitted_values() {
    let mut rng = SeededRng::new(2);
    let n = 30;
    let a: Vec<f64> = (0..n).map(|_| rng.normal(0.0, 1.0)).collect();
    let mut values = Vec::new();
    for &v in &a {
        values.extend([1.0, v, 2.0 * v + 1.0]);
    }
    let x = DesignMatrix::new(vec!["(intercept)".into(), "a".into(), "b".into()], n, values.clone(), true).unwrap();
    let y: Vec<f64> = (0..n).map(|_| rng.normal(0.0, 1.0)).collect();
    let fit = ols_fit(&x, &y).unwrap();
    assert_eq!(fit.dropped, vec!["b".to_string()]);
    assert_eq!(fit.coefficient("b"), Some(0.0));
    let m = DMatrix::from_row_slice(n, 3, &values);
    let beta = m.clone().pseudo_inverse(1e-10).unwrap() * DMatrix::from_column_slice(n, 1, &y);
    let fitted = m * beta;
    for i in 0..n {
        assert!((fit.fitted[i] - fitted[i]).abs() < 1e-8);
    }
}

#[test]
fn logistic_beats_grid_search() {
    let mut rng = SeededRng::new(3);
    for _ in 0..10 {
        let n = 40;
        let (a, b) = (rng.normal(0.0, 0.7), rng.normal(0.0, 1.0));
        let xs: Vec<f64> = (0..n).map(|_| rng.normal(0.0, 1.0)).collect();
        let y: Vec<bool> = xs.iter().map(|&x| rng.bernoulli(1.0 / (1.0 + (-(a + b * x)).exp()))).collect();
        let values: Vec<f64> = xs.iter().flat_map(|&x| [1.0, x]).collect();
        let x = DesignMatrix::new(vec!["(intercept)".into(), "x".into()], n, values, true).unwrap();
        let fit = logistic_fit(&x, &y, LogisticOptions::default()).unwrap();
        assert!(fit.converged && !fit.separated);
        let mut best = f64::NEG_INFINITY;
        for i in -300..=300 {
            for j in -300..=300 {
                let (b0, b1) = (f64::from(i) * 0.01, f64::from(j) * 0.01);
                let eta: Vec<f64> = xs.iter().map(|&x| b0 + b1 * x).collect();
                best = best.max(bernoulli_log_likelihood(&eta, &y));
            }
        }
        assert!(fit.log_likelihood >= best - 1e-12, "{} < {best}", fit.log_likelihood);
    }
}

#[test]
fn smoother_matches_double_loop() {
    let mut rng = SeededRng::new(4);
    let points: Vec<((f64, f64), bool)> = (0..300)
        .map(|_| ((rng.uniform_in(-200.0, 200.0), rng.uniform_in(0.0, 400.0)), rng.bernoulli(0.4)))
        .collect();
    let bw = Bandwidth { x: 25.0, y: 30.0 };
    let s = smooth_out_probability(&points, bw).unwrap();
    let gx: Vec<f64> = (0..12).map(|i| -220.0 + 40.0 * f64::from(i)).collect();
    let gy: Vec<f64> = (0..10).map(|i| 45.0 * f64::from(i)).collect();
    let grid = s.evaluate_grid(&gx, &gy);
    for (iy, &y) in gy.iter().enumerate() {
        for (ix, &x) in gx.iter().enumerate() {
            let (mut num, mut den) = (0.0, 0.0);
            for &((px, py), out) in &points {
                let w = (-0.5 * (((x - px) / bw.x).powi(2) + ((y - py) / bw.y).powi(2))).exp();
                num += w * if out { 1.0 } else { 0.0 };
                den += w;
            }
            let naive = num / den;
            assert!((s.evaluate(x, y) - naive).abs() < 1e-10);
            assert!((grid[iy * gx.len() + ix] - naive).abs() < 1e-10);
        }
    }
}
