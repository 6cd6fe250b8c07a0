//! Output formatting shared by the CSV writers.

/// Format `x` with `digits` significant digits, `%g` style.
pub fn sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    // Round first so the exponent reflects the printed mantissa.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= digits as i32 {
        let mant = trim_zeros(mant);
        format!("{mant}e{exp}")
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Nine significant digits, the precision used in every CSV export.
pub fn csv_float(x: f64) -> String {
    sig(x, 9)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig(0.18043338123, 9), "0.180433381");
        assert_eq!(sig(1.0, 9), "1");
        assert_eq!(sig(-2.5e-7, 9), "-2.5e-7");
        assert_eq!(sig(123456789012.0, 9), "1.23456789e11");
        assert_eq!(sig(0.0625, 9), "0.0625");
        assert_eq!(sig(f64::NEG_INFINITY, 9), "-inf");
        assert_eq!(sig(9.9999999999, 3), "10");
    }
}
