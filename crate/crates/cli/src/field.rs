//! Scalar fields on a matrix group given as arithmetic expressions in the
//! matrix entries `g11, g12, ...` (1-based row then column).

use evalexpr::{build_operator_tree, ContextWithMutableVariables, HashMapContext, Value};

use subriemann::carre::ScalarField;
use subriemann::{Error, Matrix, Result};

fn entry_of(name: &str, rep_dim: usize) -> Option<(usize, usize)> {
    let digits = name.strip_prefix('g')?;
    let mut chars = digits.chars();
    let r = chars.next()?.to_digit(10)? as usize;
    let c = chars.next()?.to_digit(10)? as usize;
    if chars.next().is_some() || r == 0 || c == 0 || r > rep_dim || c > rep_dim {
        return None;
    }
    Some((r - 1, c - 1))
}

/// Parses `expr`; every variable must be a matrix entry of the model.
pub fn parse_field(expr: &str, rep_dim: usize) -> Result<ScalarField> {
    if rep_dim > 9 {
        return Err(Error::Parse(format!(
            "field expressions address entries as gRC, which needs rep_dim <= 9 (got {rep_dim})"
        )));
    }
    let tree = build_operator_tree(expr).map_err(|e| Error::Parse(format!("field {expr:?}: {e}")))?;
    let mut vars = Vec::new();
    for name in tree.iter_variable_identifiers() {
        let (r, c) = entry_of(name, rep_dim).ok_or_else(|| {
            Error::Parse(format!(
                "field {expr:?}: unknown variable {name:?}; use g11 .. g{rep_dim}{rep_dim}"
            ))
        })?;
        if !vars.iter().any(|(n, _, _): &(String, usize, usize)| n == name) {
            vars.push((name.to_string(), r, c));
        }
    }
    let bind = move |g: &Matrix<f64>| -> Result<HashMapContext> {
        let mut ctx = HashMapContext::new();
        for (name, r, c) in &vars {
            ctx.set_value(name.clone(), Value::Float(g[(*r, *c)]))
                .map_err(|e| Error::Numeric(e.to_string()))?;
        }
        Ok(ctx)
    };
    // malformed trees only fail at evaluation
    tree.eval_number_with_context(&bind(&Matrix::identity(rep_dim))?)
        .map_err(|e| Error::Parse(format!("field {expr:?}: {e}")))?;
    let note = expr.to_string();
    Ok(ScalarField::new(note.clone(), move |g| {
        tree.eval_number_with_context(&bind(g)?)
            .map_err(|e| Error::Numeric(format!("field {note:?}: {e}")))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_entries() {
        let f = parse_field("g12 * g23 + 2 * g13^2", 3).unwrap();
        let g = Matrix::from_row_major(3, 3, vec![1.0, 2.0, 3.0, 0.0, 1.0, 5.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(f.eval(&g).unwrap(), 28.0);
    }

    #[test]
    fn rejects_foreign_variables() {
        assert!(parse_field("x + g11", 3).is_err());
        assert!(parse_field("g44", 3).is_err());
        assert!(parse_field("g1", 3).is_err());
        assert!(parse_field("g11 +", 3).is_err());
        assert!(parse_field("1 / g12", 3).is_ok());
    }
}
