//! Number rendering shared by every text output.

/// Renders `v` with 9 significant digits in the style of C's `%.9g`:
/// fixed notation for decimal exponents in `[-4, 9)`, scientific otherwise,
/// trailing zeros trimmed.
pub fn sig9(v: f64) -> String {
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_like_printf_g() {
        assert_eq!(sig9(0.123456789), "0.123456789");
        assert_eq!(sig9(0.75), "0.75");
        assert_eq!(sig9(1000.0), "1000");
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(0.01), "0.01");
        assert_eq!(sig9(2.0 / 3.0), "0.666666667");
        assert_eq!(sig9(123456789.4), "123456789");
        assert_eq!(sig9(1234567891.0), "1.23456789e+09");
        assert_eq!(sig9(1.5e-7), "1.5e-07");
        assert_eq!(sig9(0.000012345), "1.2345e-05");
        assert_eq!(sig9(-0.5), "-0.5");
        assert_eq!(sig9(0.0001), "0.0001");
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(f64::INFINITY), "inf");
        assert_eq!(sig9(9.9999999999), "10");
    }
}
