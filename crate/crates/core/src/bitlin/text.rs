//! Plain-text matrix format: a `rows cols` header, then one line of `0`/`1`
//! characters per row.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use super::BitMatrix;
use crate::error::{Error, Result};

impl BitMatrix {
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + self.rows() * (self.cols() + 1));
        let _ = writeln!(out, "{} {}", self.rows(), self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(if self.get(i, j) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {}", self.rows(), self.cols())?;
        let mut line = Vec::with_capacity(self.cols() + 1);
        for i in 0..self.rows() {
            line.clear();
            line.extend((0..self.cols()).map(|j| if self.get(i, j) { b'1' } else { b'0' }));
            line.push(b'\n');
            w.write_all(&line)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<BitMatrix> {
        Self::read_text(text.as_bytes())
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<BitMatrix> {
        let mut lines = r.lines();
        let header = lines.next().transpose()?.ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: 1,
                msg: format!("bad header {header:?}: {e}"),
            })?;
        let [rows, cols] = dims[..] else {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header must be `rows cols`, got {header:?}"),
            });
        };
        let mut m = BitMatrix::try_zeros(rows, cols)?;
        for i in 0..rows {
            let line_no = i + 2;
            let line = lines.next().transpose()?.ok_or(Error::Parse {
                line: line_no,
                msg: format!("expected {rows} rows, found {i}"),
            })?;
            let line = line.trim_end();
            if line.len() != cols {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("row has {} characters, expected {cols}", line.len()),
                });
            }
            for (j, c) in line.bytes().enumerate() {
                match c {
                    b'0' => {}
                    b'1' => m.set(i, j, true),
                    other => {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("unexpected character {:?}", other as char),
                        })
                    }
                }
            }
        }
        for (k, rest) in lines.enumerate() {
            if !rest?.trim().is_empty() {
                return Err(Error::Parse {
                    line: rows + 2 + k,
                    msg: "trailing data after last row".into(),
                });
            }
        }
        Ok(m)
    }
}
