use std::f64::consts::PI;

pub const NAMES: &str = "const, x, square, cube, sin, abs, sqrt, step";

/// Test functions for `besov modulus`.
pub fn lookup(name: &str) -> Option<fn(f64) -> f64> {
    let f: fn(f64) -> f64 = match name {
        "const" => |_| 1.0,
        "x" => |x| x,
        "square" => |x| x * x,
        "cube" => |x| x * x * x,
        "sin" => |x| (2.0 * PI * x).sin(),
        "abs" => |x| (x - 0.5).abs(),
        "sqrt" => |x| x.abs().sqrt(),
        "step" => |x| if x > 0.5 { 1.0 } else { 0.0 },
        _ => return None,
    };
    Some(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_name_resolves() {
        for n in NAMES.split(", ") {
            assert!(lookup(n).is_some(), "{n}");
        }
        assert!(lookup("cosh").is_none());
    }
}
