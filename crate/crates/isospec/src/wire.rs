//! Serde helpers: complex scalars serialize as `[re, im]` pairs, matching
//! the matrix and polynomial wire formats.

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::Serializer;

pub(crate) fn complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&z.re)?;
    seq.serialize_element(&z.im)?;
    seq.end()
}

pub(crate) fn opt_complex<S: Serializer>(
    z: &Option<Complex64>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match z {
        Some(z) => complex(z, s),
        None => s.serialize_none(),
    }
}
