use incind_core::atoms::Variable;
use incind_core::team::{Team, Value};

use crate::cursor::Cursor;
use crate::SyntaxError;

/// A header of comma-separated variables, then one row per line with values
/// `v<k>` after canonical renaming, rows in lexicographic order. No newline
/// follows the last row; a team without rows is just the header and `\n`.
pub fn serialize_team(t: &Team) -> String {
    let t = t.canonical();
    let header: Vec<&str> = t.domain().iter().map(Variable::name).collect();
    let mut out = header.join(",");
    out.push('\n');
    let rows: Vec<String> = t
        .rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    out.push_str(&rows.join("\n"));
    out
}

fn value(cur: &mut Cursor<'_>) -> Result<Value, SyntaxError> {
    cur.expect("v")?;
    Ok(Value(cur.number()? as u32))
}

/// Reads the format written by [`serialize_team`].
pub fn parse_team(text: &str) -> Result<Team, SyntaxError> {
    let mut lines = text.lines();
    let mut cur = Cursor::new(lines.next().unwrap_or(""), 1);
    let domain = cur.variables(&[])?;
    cur.expect_end()?;
    let mut rows = Vec::new();
    for (i, raw) in lines.enumerate() {
        let mut cur = Cursor::new(raw, i + 2);
        let row = cur.list(&[], value)?;
        cur.expect_end()?;
        if row.len() != domain.len() {
            return Err(cur.error(format!(
                "row has {} values for {} variables",
                row.len(),
                domain.len()
            )));
        }
        rows.push(row);
    }
    Team::new(domain, rows).map_err(|e| SyntaxError::Parse {
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(names: &[&str]) -> Vec<Variable> {
        names.iter().map(|n| Variable::new(n).unwrap()).collect()
    }

    fn team(names: &[&str], rows: &[&[u32]]) -> Team {
        Team::new(
            vs(names),
            rows.iter()
                .map(|r| r.iter().map(|&x| Value(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn one_row() {
        assert_eq!(serialize_team(&team(&["x", "y"], &[&[0, 1]])), "x,y\nv0,v1");
        assert_eq!(serialize_team(&team(&["x", "y"], &[&[7, 3]])), "x,y\nv0,v1");
    }

    #[test]
    fn empty_team() {
        assert_eq!(serialize_team(&team(&["x"], &[])), "x\n");
        assert_eq!(parse_team("x\n").unwrap(), team(&["x"], &[]));
    }

    #[test]
    fn product_team_rows_are_sorted() {
        let t = team(&["x", "y"], &[&[5, 9], &[4, 8], &[5, 8], &[4, 9]]);
        assert_eq!(serialize_team(&t), "x,y\nv0,v1\nv0,v2\nv3,v1\nv3,v2");
    }

    #[test]
    fn round_trip() {
        let t = team(&["a", "b", "c"], &[&[0, 0, 1], &[1, 2, 0], &[2, 2, 2]]);
        let text = serialize_team(&t);
        assert_eq!(serialize_team(&parse_team(&text).unwrap()), text);
    }

    #[test]
    fn malformed_rows() {
        assert!(parse_team("x,y\nv0").is_err());
        assert!(parse_team("x,y\nv0,w1").is_err());
        assert!(parse_team("x,x\n").is_err());
    }
}
