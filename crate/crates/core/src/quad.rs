//! Adaptive Simpson quadrature with a relative tolerance.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// ∫ₐᵇ f(x) dx to relative tolerance `rel_tol`.
///
/// The relative tolerance is converted to an absolute one using a 4-panel
/// estimate of ∫|f|, then distributed over subintervals as they split.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if !(rel_tol > 0.0) {
        return Err(Error::param("rel_tol", "must be > 0"));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::param("bounds", "integration bounds must be finite"));
    }
    if a == b {
        return Ok(0.0);
    }

    let h = (b - a) / 8.0;
    let samples: Vec<f64> = (0..=8).map(|i| f(a + i as f64 * h)).collect();
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(
            "integrand is not finite on the interval".into(),
        ));
    }
    let scale = (0..4)
        .map(|i| {
            let j = 2 * i;
            simpson(
                a + j as f64 * h,
                a + (j + 2) as f64 * h,
                samples[j].abs(),
                samples[j + 1].abs(),
                samples[j + 2].abs(),
            )
        })
        .sum::<f64>()
        .abs();
    let abs_tol = rel_tol * scale.max(f64::MIN_POSITIVE);

    let (fa, fm, fb) = (samples[0], samples[4], samples[8]);
    let root = Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole: simpson(a, b, fa, fm, fb),
    };
    refine(&f, root, abs_tol, MAX_DEPTH)
}

fn refine<F: Fn(f64) -> f64>(f: &F, p: Panel, tol: f64, depth: u32) -> Result<f64> {
    let m = 0.5 * (p.a + p.b);
    let lm = 0.5 * (p.a + m);
    let rm = 0.5 * (m + p.b);
    let flm = f(lm);
    let frm = f(rm);
    if !(flm.is_finite() && frm.is_finite()) {
        return Err(Error::Numerical(format!(
            "integrand is not finite near x = {m}"
        )));
    }
    let left = simpson(p.a, m, p.fa, flm, p.fm);
    let right = simpson(m, p.b, p.fm, frm, p.fb);
    let delta = left + right - p.whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Numerical(format!(
            "adaptive Simpson did not converge on [{}, {}]",
            p.a, p.b
        )));
    }
    let l = refine(
        f,
        Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
        },
        0.5 * tol,
        depth - 1,
    )?;
    let r = refine(
        f,
        Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
        },
        0.5 * tol,
        depth - 1,
    )?;
    Ok(l + r)
}
