//! Number rendering shared by the CSV and JSON writers.

/// Formats `x` like C's `%.17g`: 17 significant digits, trailing zeros
/// trimmed, scientific notation outside `1e-5 <= |x| < 1e17`.
pub fn g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

/// A JSON number carrying the `g17` rendering verbatim; `null` when not finite.
pub fn json_num(x: f64) -> serde_json::Value {
    if !x.is_finite() {
        return serde_json::Value::Null;
    }
    let text = g17(x);
    match text.parse::<serde_json::Number>() {
        Ok(n) => serde_json::Value::Number(n),
        Err(_) => serde_json::Value::Null,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g17() {
        assert_eq!(g17(0.0), "0");
        assert_eq!(g17(-3.0), "-3");
        assert_eq!(g17(0.5), "0.5");
        assert_eq!(g17(0.1), "0.10000000000000001");
        assert_eq!(g17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(g17(123456.0), "123456");
        assert_eq!(g17(1e-7), "9.9999999999999995e-08");
        assert_eq!(g17(2.5e20), "2.5e+20");
    }

    #[test]
    fn round_trips() {
        for x in [0.1, 1.0 / 7.0, -2.345e-9, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_numbers_are_verbatim() {
        let v = serde_json::json!({ "x": json_num(0.1) });
        assert_eq!(v.to_string(), r#"{"x":0.10000000000000001}"#);
        assert_eq!(json_num(f64::NAN), serde_json::Value::Null);
    }
}
