use std::io::Read;

use super::{Design, Scalar};
use crate::{Error, Result};

/// Reads a design from CSV: one point per row, an optional header row
/// (recognised by a non-numeric first row), decimal or `p/q` literals.
pub fn read_design<R: Read>(reader: R) -> Result<Design> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let line = idx + 1;
        let record = record.map_err(|e| Error::Parse { line, message: e.to_string() })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Result<Vec<Scalar>> = record.iter().map(Scalar::parse).collect();
        match parsed {
            Ok(row) => {
                if let Some(first) = rows.first() {
                    if first.len() != row.len() {
                        return Err(Error::Parse {
                            line,
                            message: format!("expected {} columns, found {}", first.len(), row.len()),
                        });
                    }
                }
                rows.push(row);
            }
            Err(_) if idx == 0 => continue,
            Err(Error::Parse { message, .. }) => return Err(Error::Parse { line, message }),
            Err(e) => return Err(e),
        }
    }
    if rows.is_empty() {
        return Err(Error::Parse { line: 0, message: "no design points found".into() });
    }
    Design::new(rows)
}

/// Reads a tolerance vector from a one-row CSV (header allowed).
pub fn read_tolerance<R: Read>(reader: R) -> Result<Vec<f64>> {
    let design = read_design(reader)?;
    if design.n() != 1 {
        return Err(Error::Parse {
            line: 0,
            message: format!("tolerance file must have one row, found {}", design.n()),
        });
    }
    Ok(design.point(0).to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_with_and_without_header() {
        let d = read_design("x1,x2\n1,-1\n-1, 1\n".as_bytes()).unwrap();
        assert_eq!((d.n(), d.d()), (2, 2));
        assert!(d.has_exact());
        let d = read_design("1/2,3\n\n0.25,1e1\n".as_bytes()).unwrap();
        assert_eq!(d.point(1), &[0.25, 10.0]);
    }

    #[test]
    fn parse_failures() {
        assert!(matches!(read_design("".as_bytes()), Err(Error::Parse { .. })));
        assert!(matches!(read_design("a,b\n".as_bytes()), Err(Error::Parse { .. })));
        assert!(matches!(read_design("1,2\n3\n".as_bytes()), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_design("1,2\n3,x\n".as_bytes()), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn tolerance_rows() {
        assert_eq!(read_tolerance("dT,dV\n12.5,7\n".as_bytes()).unwrap(), vec![12.5, 7.0]);
        assert!(read_tolerance("1,2\n3,4\n".as_bytes()).is_err());
    }
}
