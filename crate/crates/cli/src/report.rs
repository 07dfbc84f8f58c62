use serde_json::Value;

/// Result of one subcommand: text for people, JSON for programs, and
/// whether every check it ran succeeded.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

impl Report {
    pub fn new(text: String, json: Value) -> Self {
        Report { text, json, ok: true }
    }

    pub fn failed_unless(mut self, ok: bool) -> Self {
        self.ok &= ok;
        self
    }
}

/// Left-aligned columns separated by two spaces, with a dashed rule under
/// the header.
pub fn emit_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = vec![line(headers.to_vec())];
    out.push(line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect()));
    for row in rows {
        out.push(line(row.iter().map(String::as_str).collect()));
    }
    out.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_table_is_header_only() {
        assert_eq!(emit_table(&["n", "value"], &[]), "n  value\n-  -----");
    }

    #[test]
    fn columns_align() {
        let rows = vec![vec!["0".to_string(), "1".to_string()], vec!["10".to_string(), "1 - y".to_string()]];
        assert_eq!(emit_table(&["n", "value"], &rows), "n   value\n--  -----\n0   1\n10  1 - y");
    }
}
