use super::{TransformError, MIN_ORDER};
use crate::gpp::{Gpp, GppTree};
use crate::numerics::Rational;

/// The tree of order `n` maximizing the count of eigenvalues above `d_n`.
/// With `r = ⌊n/4⌋`, one vertex carries
///
/// | `n mod 4` | pendants                      |
/// |-----------|-------------------------------|
/// | 0         | `P_0*S_{r-1} ⊕ P_1*S_r`       |
/// | 1         | `P_0*S_r ⊕ P_0*S_r`           |
/// | 2         | `P_0*S_r ⊕ P_1*S_r`           |
/// | 3         | `P_1*S_r ⊕ P_1*S_r`           |
pub fn prototype(n: usize) -> Result<GppTree, TransformError> {
    if n < MIN_ORDER {
        return Err(TransformError::TooSmall { n });
    }
    let r = n / 4;
    let gpps = match n % 4 {
        0 => vec![Gpp::new(0, r - 1), Gpp::new(1, r)],
        1 => vec![Gpp::new(0, r), Gpp::new(0, r)],
        2 => vec![Gpp::new(0, r), Gpp::new(1, r)],
        _ => vec![Gpp::new(1, r), Gpp::new(1, r)],
    };
    Ok(GppTree::single(gpps)?)
}

/// One vertex with `2r + 1` pendant `P_2`s, order `4r + 3`.
pub fn star_of_suns(r: usize) -> GppTree {
    GppTree::single(vec![Gpp::new(0, r), Gpp::new(0, r + 1)]).expect("nonempty pendants")
}

/// Diagonal value at the centre of the prototype of order `4r + alpha` when
/// diagonalizing at `-d_n`, as a rational function of `r`.
pub fn closed_form_f(alpha: usize, r: usize) -> Result<Rational, TransformError> {
    let q = |a: i64, b: i64| Rational::new(a, b).expect("denominator is nonzero for r >= 1");
    let r = r as i64;
    let (r2, r3, r4) = (r * r, r * r * r, r * r * r * r);
    let (r5, r6) = (r4 * r, r4 * r2);
    Ok(match alpha {
        0 => {
            let num = 64 * r6 + 64 * r5 - 36 * r4 + 36 * r3 - 32 * r2 + 10 * r - 1;
            let den = 2 * r * (4 * r2 + 2 * r - 1) * (2 * r2 - 4 * r + 1);
            q(num, den)
        }
        2 => {
            let num = 64 * r6 + 256 * r5 + 348 * r4 + 260 * r3 + 95 * r2 + 16 * r + 1;
            let den = (2 * r + 1) * (4 * r2 + 6 * r + 1) * r * (6 * r + 1);
            q(num, den)
        }
        3 => {
            let num = 4 * (128 * r4 + 448 * r3 + 576 * r2 + 302 * r + 55);
            let den = (4 * r + 3) * (64 * r2 + 52 * r + 11);
            q(num, den)
        }
        other => return Err(TransformError::BadAlpha(other)),
    })
}

/// Largest `r` for which the single-sun value `b_1(r)` is still negative,
/// i.e. `⌊r_0⌋` with `r_0` from [`crate::gpp::zero_sun_size`].
pub fn zero_index_bound(n: usize) -> usize {
    let r0 = crate::gpp::zero_sun_size(n);
    usize::try_from(r0.floor()).expect("nonnegative")
}
