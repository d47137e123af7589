//! Row-major `[[re, im], ...]` matrix encoding shared by the state and channel
//! JSON formats.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::QOperator;

pub type Entries = Vec<[f64; 2]>;

pub fn encode_entries(op: &QOperator) -> Entries {
    let m = op.matrix();
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            out.push([z.re, z.im]);
        }
    }
    out
}

pub fn decode_entries(rows: usize, cols: usize, entries: &[[f64; 2]]) -> Result<QOperator> {
    if entries.len() != rows * cols {
        return Err(Error::Encoding(format!(
            "expected {} entries for a {rows}x{cols} matrix, found {}",
            rows * cols,
            entries.len()
        )));
    }
    if entries.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Encoding("non-finite matrix entry".into()));
    }
    let values: Vec<Complex64> = entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
    Ok(QOperator::from_row_slice(rows, cols, &values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::c64;

    #[test]
    fn row_major_layout() {
        let m = QOperator::from_row_slice(
            2,
            3,
            &[c64(1.0, 0.0), c64(2.0, 0.5), c64(3.0, 0.0), c64(4.0, 0.0), c64(5.0, 0.0), c64(6.0, -1.0)],
        );
        let e = encode_entries(&m);
        assert_eq!(e[1], [2.0, 0.5]);
        assert_eq!(e[5], [6.0, -1.0]);
        assert_eq!(decode_entries(2, 3, &e).unwrap(), m);
    }

    #[test]
    fn wrong_length_is_rejected() {
        assert!(matches!(decode_entries(2, 2, &[[0.0, 0.0]; 3]), Err(Error::Encoding(_))));
        assert!(decode_entries(1, 1, &[[f64::NAN, 0.0]]).is_err());
    }
}
