use serde_json::{Number, Value};

/// `x` with `digits` significant digits, fixed-point for moderate
/// magnitudes and scientific otherwise, trailing zeros removed.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn human(x: f64) -> String {
    sig(x, 10)
}

/// JSON number, shortest form that round-trips; `null` if non-finite.
pub fn json(x: f64) -> Value {
    Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn json_vec(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| json(x)).collect())
}

pub fn human_vec(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| human(x)).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(human(0.25), "0.25");
        assert_eq!(human(6.0), "6");
        assert_eq!(human(1.0 / 3.0), "0.3333333333");
        assert_eq!(human(-2.0 / 3.0), "-0.6666666667");
        assert_eq!(human(123456.789), "123456.789");
        assert_eq!(human(1e-7), "1e-7");
        assert_eq!(human(2.5e12), "2.5e12");
        assert_eq!(human(9.9999999999), "10");
        assert_eq!(human(0.0), "0");
        assert_eq!(human(f64::NAN), "NaN");
    }

    #[test]
    fn json_numbers_round_trip() {
        let x = 1.0 / 3.0;
        let v = json(x);
        assert_eq!(v.as_f64().unwrap().to_bits(), x.to_bits());
        assert_eq!(json(f64::INFINITY), Value::Null);
    }
}
