//! Plain-text constant tables.
//!
//! A table file is a sequence of blocks. Each block opens with a header
//! `[name rows cols]` followed by `rows` lines of `cols` whitespace-separated
//! numbers. Blank lines and lines starting with `#` are ignored.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries.
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConstantTable {
    blocks: Vec<(String, Matrix)>,
}

impl ConstantTable {
    pub fn parse(text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::ConstantTable { line, message };
        let mut blocks: Vec<(String, Matrix)> = Vec::new();
        // (name, rows, cols, header line, entries)
        let mut open: Option<(String, usize, usize, usize, Vec<f64>)> = None;

        let close = |open: &mut Option<(String, usize, usize, usize, Vec<f64>)>,
                     blocks: &mut Vec<(String, Matrix)>|
         -> Result<()> {
            if let Some((name, rows, cols, line, data)) = open.take() {
                if data.len() != rows * cols {
                    return Err(err(
                        line,
                        format!("block `{name}` declares {rows}x{cols} but holds {} values", data.len()),
                    ));
                }
                blocks.push((name, Matrix { rows, cols, data }));
            }
            Ok(())
        };

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(header) = line.strip_prefix('[') {
                close(&mut open, &mut blocks)?;
                let header = header
                    .strip_suffix(']')
                    .ok_or_else(|| err(lineno, "unterminated block header".into()))?;
                let parts: Vec<&str> = header.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(err(lineno, format!("expected `[name rows cols]`, got `[{header}]`")));
                }
                let dim = |s: &str| {
                    s.parse::<usize>()
                        .ok()
                        .filter(|&v| v > 0)
                        .ok_or_else(|| err(lineno, format!("bad block size `{s}`")))
                };
                let name = parts[0].to_string();
                if blocks.iter().any(|(n, _)| *n == name) {
                    return Err(err(lineno, format!("duplicate block `{name}`")));
                }
                open = Some((name, dim(parts[1])?, dim(parts[2])?, lineno, Vec::new()));
                continue;
            }
            let (_, rows, cols, _, data) = open
                .as_mut()
                .ok_or_else(|| err(lineno, "values outside of a block".into()))?;
            let values = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| err(lineno, format!("bad number `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            if values.len() != *cols {
                return Err(err(lineno, format!("expected {cols} values, found {}", values.len())));
            }
            if data.len() == *rows * *cols {
                return Err(err(lineno, format!("more than {rows} rows")));
            }
            data.extend(values);
        }
        close(&mut open, &mut blocks)?;
        Ok(Self { blocks })
    }

    pub fn get(&self, name: &str) -> Option<&Matrix> {
        self.blocks.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    /// Named block with the expected shape.
    pub fn require(&self, name: &str, rows: usize, cols: usize) -> Result<&Matrix> {
        let m = self.get(name).ok_or_else(|| Error::ConstantTable {
            line: 0,
            message: format!("missing block `{name}`"),
        })?;
        if m.rows != rows || m.cols != cols {
            return Err(Error::ConstantTable {
                line: 0,
                message: format!("block `{name}` is {}x{}, expected {rows}x{cols}", m.rows, m.cols),
            });
        }
        Ok(m)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.blocks.iter().map(|(n, _)| n.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_blocks() {
        let t = ConstantTable::parse("# c\n[a 2 2]\n1 2\n3 4\n\n[b 1 3]\n0.5 -1 2e-3\n").unwrap();
        let a = t.require("a", 2, 2).unwrap();
        assert_eq!(a.get(1, 0), 3.0);
        assert_eq!(t.get("b").unwrap().row(0), &[0.5, -1.0, 2e-3]);
        assert_eq!(t.names().collect::<Vec<_>>(), vec!["a", "b"]);
        assert!(t.require("a", 1, 4).is_err());
        assert!(t.require("zz", 1, 1).is_err());
    }

    #[test]
    fn reports_offending_line() {
        let line = |text: &str| match ConstantTable::parse(text) {
            Err(Error::ConstantTable { line, .. }) => line,
            other => panic!("expected table error, got {other:?}"),
        };
        assert_eq!(line("[a 1 2]\n1 x\n"), 2);
        assert_eq!(line("1 2\n"), 1);
        assert_eq!(line("[a 1 2]\n1 2 3\n"), 2);
        assert_eq!(line("[a 2 1]\n1\n"), 1);
        assert_eq!(line("[a 1 1]\n1\n2\n"), 3);
        assert_eq!(line("[a 1]\n"), 1);
        assert_eq!(line("[a 1 1]\n1\n[a 1 1]\n2\n"), 3);
    }
}
