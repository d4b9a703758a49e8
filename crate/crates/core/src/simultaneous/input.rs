use super::{Constraint, ConstraintSet};
use crate::error::{Error, Result};
use crate::rational::parse_real;

/// Reads constraints written one per line as `X T`. `X` is anything
/// [`parse_real`] accepts; `T` must be a positive fraction or decimal.
/// `#` starts a comment and blank lines are skipped. Errors name the
/// 1-based line.
pub fn parse_constraints(text: &str, precision: u32) -> Result<ConstraintSet> {
    let mut items = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at_line = |e: Error| Error::invalid(format!("line {line_no}: {e}"));
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [x, t] = fields[..] else {
            return Err(Error::invalid(format!(
                "line {line_no}: expected \"X T\", found {} field(s)",
                fields.len()
            )));
        };
        let x = parse_real(x, precision).map_err(at_line)?;
        if t.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return Err(Error::invalid(format!(
                "line {line_no}: weight {t:?} must be a fraction or decimal"
            )));
        }
        let t = parse_real(t, precision).map_err(at_line)?;
        if !t.is_positive() {
            return Err(Error::invalid(format!(
                "line {line_no}: weight {t} must be positive"
            )));
        }
        items.push(Constraint { x, t });
    }
    if items.is_empty() {
        return Err(Error::invalid("input contains no constraints"));
    }
    ConstraintSet::new(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn parses_lines_and_comments() {
        let text = "# header\n1/3 1\n\n  sqrt2   1/2  # trailing\n0.25 2\n";
        let cs = parse_constraints(text, 5).unwrap();
        assert_eq!(cs.len(), 3);
        assert_eq!(cs.items()[0].x, r(1, 3));
        assert_eq!(cs.items()[1].x, r(141421, 100000));
        assert_eq!(cs.items()[1].t, r(1, 2));
        assert_eq!(cs.items()[2].x, r(1, 4));
        assert_eq!(cs.t_min(), &r(1, 2));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_constraints("1/2 1\n1/3\n", 64).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = parse_constraints("1/2 1\n\nabc 1\n", 64).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = parse_constraints("1/2 0\n", 64).unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        let err = parse_constraints("1/2 pi\n", 64).unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        assert!(parse_constraints("# nothing\n\n", 64).is_err());
        assert!(parse_constraints("1/2 1 3\n", 64).is_err());
    }
}
