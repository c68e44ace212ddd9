//! Plain-text matrix files: a header line `r c p`, then `r` lines of `c`
//! integers. Entries may be negative and are reduced mod `p`. Lines starting
//! with `#` are ignored.

use super::{DenseMatrix, SkewMatrix};
use crate::error::{invalid, Result};
use crate::ffield::PrimeField;

/// Whitespace-separated tokens, skipping comment lines.
pub(crate) fn tokens(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace)
}

pub(crate) fn next_number<'a, T: std::str::FromStr>(
    it: &mut impl Iterator<Item = &'a str>,
    what: &str,
) -> Result<T> {
    match it.next() {
        None => invalid(format!("unexpected end of input while reading {what}")),
        Some(tok) => tok.parse().or_else(|_| invalid(format!("cannot parse {what} from {tok:?}"))),
    }
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let mut it = tokens(text);
    let rows: usize = next_number(&mut it, "row count")?;
    let cols: usize = next_number(&mut it, "column count")?;
    let p: u64 = next_number(&mut it, "prime")?;
    let field = PrimeField::new(p)?;
    let m = read_entries(&mut it, field, rows, cols)?;
    if it.next().is_some() {
        return invalid("trailing data after matrix entries");
    }
    Ok(m)
}

pub(crate) fn read_entries<'a>(
    it: &mut impl Iterator<Item = &'a str>,
    field: PrimeField,
    rows: usize,
    cols: usize,
) -> Result<DenseMatrix> {
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let x: i64 = next_number(it, "matrix entry")?;
        data.push(field.from_i64(x));
    }
    DenseMatrix::new(field, rows, cols, data)
}

pub fn parse_skew(text: &str) -> Result<SkewMatrix> {
    SkewMatrix::new(parse_matrix(text)?)
}

pub fn write_matrix(m: &DenseMatrix) -> String {
    let mut out = format!("{} {} {}\n", m.rows(), m.cols(), m.field().modulus());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = parse_matrix("# comment\n2 3 101\n1 2 -1\n0 0 5\n").unwrap();
        assert_eq!(m.get(0, 2).value(), 100);
        assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_matrix("2 2 101\n1 2 3").is_err());
        assert!(parse_matrix("1 1 100\n1").is_err());
        assert!(parse_matrix("1 1 101\n1 2").is_err());
        assert!(parse_skew("2 2 101\n0 1\n1 0").is_err());
        assert!(parse_skew("2 2 101\n0 1\n-1 0").is_ok());
    }
}
