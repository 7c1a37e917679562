//! Stable number formatting for reports.

/// Formats `x` with six significant digits. Values whose decimal exponent
/// lies in `-4..6` are written in fixed notation keeping trailing zeros,
/// others in `e` notation. Infinities are written `inf` / `-inf`.
pub fn sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.00000".into();
    }
    let sci = format!("{x:.5e}");
    let exp: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .expect("float exponent");
    if !(-4..6).contains(&exp) {
        return sci;
    }
    let decimals = (5 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}
