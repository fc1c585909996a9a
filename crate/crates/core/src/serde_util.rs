//! Complex numbers on the wire are `[re, im]` pairs.

pub mod complex {
    use num_complex::Complex64;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([z.re, z.im])
    }
}

pub mod complex_vec {
    use num_complex::Complex64;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(zs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(zs.iter().map(|z| [z.re, z.im]))
    }
}
