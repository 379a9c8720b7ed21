/// Four-point regularized delta kernel `phi(r)`.
///
/// The outer branch carries a minus sign in front of the square root; with it
/// the kernel is continuous at `|r| = 1` and sums to one over integer shifts.
pub fn delta_phi(r: f64) -> f64 {
    let a = r.abs();
    if a < 1.0 {
        0.125 * (3.0 - 2.0 * a + (1.0 + 4.0 * a - 4.0 * a * a).sqrt())
    } else if a < 2.0 {
        0.125 * (5.0 - 2.0 * a - (-7.0 + 12.0 * a - 4.0 * a * a).sqrt())
    } else {
        0.0
    }
}
