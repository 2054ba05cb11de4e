//! Text form of exact rationals: `"3"`, `"-1/2"`.

use std::fmt::Display;

use num_integer::Integer;
use num_rational::{Ratio, Rational64};

pub fn format_rational<T: Clone + Integer + Display>(x: &Ratio<T>) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational64> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<i64>().ok().map(Rational64::from_integer),
        Some((n, d)) => {
            let n = n.trim().parse::<i64>().ok()?;
            let d = d.trim().parse::<i64>().ok()?;
            (d != 0).then(|| Rational64::new(n, d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["0", "3", "-1/2", "7/12"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("2/4"), Some(Rational64::new(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
