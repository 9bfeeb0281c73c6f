//! Small numerical helpers: log-gamma and stable logarithms of the factors
//! that the weight assemblies accumulate in log space.

/// Natural log of the gamma function for positive real arguments.
///
/// Lanczos approximation (g = 7, 9 coefficients), accurate to ~1e-15
/// relative over the range used here (arguments are multiplicity/block
/// combinations, all well away from the poles).
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma requires a positive argument");
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection keeps the approximation on x >= 0.5
        let pi = std::f64::consts::PI;
        return pi.ln() - (pi * x).sin().ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut sum = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + sum.ln()
}

/// ln sinh(d) for d > 0, stable for both tiny and large arguments.
pub fn ln_sinh(d: f64) -> f64 {
    debug_assert!(d > 0.0);
    if d < 1e-4 {
        // sinh d = d (1 + d^2/6 + d^4/120 + ...)
        d.ln() + (d * d / 6.0) * (1.0 - 0.05 * d * d)
    } else if d > 16.0 {
        d - std::f64::consts::LN_2 + (-(2.0 * d)).exp().ln_1p()
    } else {
        d.sinh().ln()
    }
}

/// ln(sinh(d)/d) for d >= 0. Smooth through d = 0.
pub fn ln_sinhc(d: f64) -> f64 {
    debug_assert!(d >= 0.0);
    if d < 1e-4 {
        (d * d / 6.0) * (1.0 - 0.05 * d * d)
    } else {
        ln_sinh(d) - d.ln()
    }
}

/// ln(e^{2x} - e^{2y}) for x > y, stable when the gap is small or the
/// magnitudes are large.
pub fn ln_diff_exp2(x: f64, y: f64) -> f64 {
    debug_assert!(x > y);
    2.0 * y + (2.0 * (x - y)).exp_m1().ln()
}

/// ln[(e^{2x} - e^{2y}) / (x - y)] for x > y: the smooth remainder left
/// after the linear endpoint factor is absorbed into a Jacobi weight.
pub fn ln_diff_exp2_over_gap(x: f64, y: f64) -> f64 {
    debug_assert!(x > y);
    let d = x - y;
    // e^{2x} - e^{2y} = 2 e^{x+y} sinh(x - y)
    std::f64::consts::LN_2 + x + y + ln_sinhc(d)
}
