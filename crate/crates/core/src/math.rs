//! Floating-point helpers shared by the entropy and coding routines.

/// Tolerance for probability equalities.
pub const EPS: f64 = 1e-9;

/// Two scores closer than this are treated as tied.
pub(crate) const TIE_EPS: f64 = 1e-12;

/// Neumaier compensated summation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let t = sum + v;
        if libm::fabs(sum) >= libm::fabs(v) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

pub fn log_base(x: f64, base: f64) -> f64 {
    libm::log(x) / libm::log(base)
}

/// Shannon entropy of `masses` after normalizing them to sum to one.
/// Zero masses contribute nothing.
pub fn entropy(masses: &[f64], base: f64) -> f64 {
    let total = compensated_sum(masses.iter().copied());
    if total <= 0.0 {
        return 0.0;
    }
    let h = compensated_sum(masses.iter().filter(|&&m| m > 0.0).map(|&m| {
        let q = m / total;
        -q * libm::log(q)
    }));
    h / libm::log(base)
}

/// Entropy of a mass vector in nats.
pub(crate) fn entropy_nats(masses: &[f64]) -> f64 {
    entropy(masses, core::f64::consts::E)
}

/// Smallest `l >= 0` with `arity^l >= 1/p`, i.e. `ceil(log_arity(1/p))`,
/// evaluated by repeated multiplication so exact powers of the arity land
/// on the right integer.
pub fn shannon_length(p: f64, arity: u32) -> u32 {
    assert!(p > 0.0, "shannon_length needs a positive mass");
    let d = arity as f64;
    let mut scaled = p;
    let mut len = 0;
    while scaled < 1.0 - TIE_EPS {
        scaled *= d;
        len += 1;
    }
    len
}
