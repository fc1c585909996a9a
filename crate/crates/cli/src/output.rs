use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

/// Compact JSON with every float written to 17 significant digits, which
/// round-trips any `f64` exactly.
struct RoundTrip;

impl Formatter for RoundTrip {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, RoundTrip);
    value
        .serialize(&mut ser)
        .expect("in-memory serialization cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[derive(Serialize)]
pub struct Manifest {
    pub subcommand: &'static str,
    pub input_digest: Option<String>,
    pub seed: Option<u64>,
    pub tool_version: &'static str,
    pub wall_time: f64,
}

#[derive(Serialize)]
pub struct Document<'a, T: Serialize> {
    pub manifest: &'a Manifest,
    pub result: &'a T,
}
