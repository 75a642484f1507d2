use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::SeqError;

/// Word width of direction integers and generated fractions.
pub const SOBOL_BITS: u32 = 32;

/// Joe–Kuo `new-joe-kuo-6.21201` parameters for dimensions 2..=21:
/// `(degree s, coefficient word a, initial direction integers m_1..m_s)`.
const EMBEDDED: &[(u32, u32, &[u32])] = &[
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
    (4, 1, &[1, 1, 3, 3]),
    (4, 4, &[1, 3, 5, 13]),
    (5, 2, &[1, 1, 5, 5, 17]),
    (5, 4, &[1, 1, 5, 5, 5]),
    (5, 7, &[1, 1, 7, 11, 19]),
    (5, 11, &[1, 1, 5, 1, 1]),
    (5, 13, &[1, 1, 1, 3, 11]),
    (5, 14, &[1, 3, 5, 5, 31]),
    (6, 1, &[1, 3, 3, 9, 7, 49]),
    (6, 13, &[1, 1, 1, 15, 21, 21]),
    (6, 16, &[1, 3, 1, 13, 27, 49]),
    (6, 19, &[1, 1, 1, 15, 7, 5]),
    (6, 22, &[1, 3, 1, 15, 13, 25]),
    (6, 25, &[1, 1, 5, 5, 19, 61]),
    (7, 1, &[1, 3, 7, 11, 23, 15, 103]),
    (7, 4, &[1, 3, 7, 13, 13, 15, 69]),
];

/// Primitive polynomial and initial direction integers for one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionEntry {
    /// Polynomial degree `m_j`.
    pub degree: u32,
    /// Coefficient bits `a_1 .. a_{m_j}`; the last one is always 1 for a
    /// primitive polynomial.
    pub coefficients: Vec<u8>,
    /// Initial direction integers `m_1 .. m_{m_j}`.
    pub initial: Vec<u32>,
}

impl DirectionEntry {
    /// Builds an entry from the Joe–Kuo encoding, where `a` packs the
    /// interior coefficients `a_1 .. a_{s-1}` with `a_1` most significant.
    pub fn from_joe_kuo(degree: u32, a: u32, initial: Vec<u32>) -> Result<Self, &'static str> {
        if degree == 0 || degree >= SOBOL_BITS {
            return Err("polynomial degree must be in 1..32");
        }
        if u64::from(a) >= 1u64 << (degree - 1) {
            return Err("coefficient word has more bits than degree - 1");
        }
        let mut coefficients: Vec<u8> = (1..degree).map(|k| ((a >> (degree - 1 - k)) & 1) as u8).collect();
        coefficients.push(1);
        let entry = DirectionEntry {
            degree,
            coefficients,
            initial,
        };
        entry.validate()?;
        Ok(entry)
    }

    pub fn validate(&self) -> Result<(), &'static str> {
        if self.initial.len() != self.degree as usize {
            return Err("number of initial direction integers must equal the degree");
        }
        if self.coefficients.len() != self.degree as usize {
            return Err("number of coefficients must equal the degree");
        }
        if self.coefficients.iter().any(|&c| c > 1) {
            return Err("coefficients must be bits");
        }
        for (k, &m) in self.initial.iter().enumerate() {
            if m % 2 == 0 {
                return Err("initial direction integers must be odd");
            }
            if u64::from(m) >= 1u64 << (k + 1) {
                return Err("initial direction integer m_k must be below 2^k");
            }
        }
        Ok(())
    }

    /// Full set of `SOBOL_BITS` direction integers, most significant
    /// direction first, left-aligned in a 32-bit word.
    pub fn direction_integers(&self) -> [u32; SOBOL_BITS as usize] {
        let s = self.degree as usize;
        let mut v = [0u32; SOBOL_BITS as usize];
        for k in 0..s.min(v.len()) {
            v[k] = self.initial[k] << (SOBOL_BITS as usize - 1 - k);
        }
        for k in s..v.len() {
            let mut x = v[k - s] ^ (v[k - s] >> s);
            for l in 1..s {
                if self.coefficients[l - 1] == 1 {
                    x ^= v[k - l];
                }
            }
            v[k] = x;
        }
        v
    }
}

/// Sobol' direction numbers for dimensions 2, 3, ... (dimension 1 is the
/// van der Corput sequence and needs no entry).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionTable {
    entries: Vec<DirectionEntry>,
}

impl DirectionTable {
    pub fn new(entries: Vec<DirectionEntry>) -> Self {
        DirectionTable { entries }
    }

    /// Built-in Joe–Kuo table covering dimensions 1..=21.
    pub fn embedded() -> Self {
        let entries = EMBEDDED
            .iter()
            .map(|&(s, a, m)| DirectionEntry::from_joe_kuo(s, a, m.to_vec()).expect("embedded table is valid"))
            .collect();
        DirectionTable { entries }
    }

    /// Parses the Joe–Kuo text layout: a header line, then lines of
    /// `d s a m_1 .. m_s`. Dimensions must appear in order starting at 2.
    /// Only the first `max_dim` dimensions are kept when given.
    pub fn parse(text: &str, max_dim: Option<usize>) -> Result<Self, SeqError> {
        let mut entries = Vec::new();
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        // Header.
        lines.next();
        for (lineno, line) in lines {
            let line_no = lineno + 1;
            if max_dim.is_some_and(|m| entries.len() + 1 >= m) {
                break;
            }
            let err = |msg: &str| SeqError::Parse {
                line: line_no,
                msg: msg.into(),
            };
            let fields = line
                .split_whitespace()
                .map(|t| t.parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| err(&format!("{e}")))?;
            if fields.len() < 3 {
                return Err(err("expected `d s a m_1 .. m_s`"));
            }
            let (d, s, a) = (fields[0], fields[1], fields[2]);
            if d as usize != entries.len() + 2 {
                return Err(err(&format!("expected dimension {}, found {d}", entries.len() + 2)));
            }
            if fields.len() != 3 + s as usize {
                return Err(err(&format!("degree {s} needs {s} initial direction integers")));
            }
            let entry = DirectionEntry::from_joe_kuo(s, a, fields[3..].to_vec()).map_err(err)?;
            entries.push(entry);
        }
        Ok(DirectionTable { entries })
    }

    /// Highest dimension the table supports.
    pub fn max_dim(&self) -> usize {
        self.entries.len() + 1
    }

    pub fn entries(&self) -> &[DirectionEntry] {
        &self.entries
    }

    /// Renders the table in the Joe–Kuo layout accepted by [`parse`](Self::parse).
    pub fn to_joe_kuo_string(&self) -> alloc::string::String {
        use core::fmt::Write;
        let mut out = alloc::string::String::from("d       s       a       m_i\n");
        for (idx, e) in self.entries.iter().enumerate() {
            let a = e.coefficients[..e.coefficients.len() - 1]
                .iter()
                .fold(0u32, |acc, &c| (acc << 1) | u32::from(c));
            let _ = write!(out, "{}\t{}\t{}\t", idx + 2, e.degree, a);
            for m in &e.initial {
                let _ = write!(out, "{m} ");
            }
            out.push('\n');
        }
        out
    }
}

/// Gray code `g(i) = i xor (i >> 1)`.
#[inline]
pub const fn gray_code(i: u64) -> u64 {
    i ^ (i >> 1)
}

/// Sobol' generator with direction integers expanded for a fixed dimension.
#[derive(Debug, Clone)]
pub struct SobolGenerator {
    directions: Vec<[u32; SOBOL_BITS as usize]>,
}

impl SobolGenerator {
    pub fn new(dim: usize, table: &DirectionTable) -> Result<Self, SeqError> {
        if dim == 0 {
            return Err(SeqError::ZeroDim);
        }
        if dim > table.max_dim() {
            return Err(SeqError::DimensionTooLarge {
                requested: dim,
                max: table.max_dim(),
            });
        }
        let mut directions = Vec::with_capacity(dim);
        let mut vdc = [0u32; SOBOL_BITS as usize];
        for (k, v) in vdc.iter_mut().enumerate() {
            *v = 1u32 << (SOBOL_BITS as usize - 1 - k);
        }
        directions.push(vdc);
        for entry in &table.entries[..dim - 1] {
            directions.push(entry.direction_integers());
        }
        Ok(SobolGenerator { directions })
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// Direction integers of coordinate `j` (column `k` of its generator matrix).
    pub fn directions(&self, j: usize) -> &[u32; SOBOL_BITS as usize] {
        &self.directions[j]
    }

    /// Raw 32-bit fractions of point `i` (natural index, Gray-code ordered).
    pub fn point_bits(&self, i: u64, out: &mut [u32]) -> Result<(), SeqError> {
        if i >> SOBOL_BITS != 0 {
            return Err(SeqError::IndexOutOfRange {
                index: i,
                bits: SOBOL_BITS,
            });
        }
        let g = gray_code(i);
        for (x, v) in out.iter_mut().zip(&self.directions) {
            let mut acc = 0u32;
            let mut bits = g;
            while bits != 0 {
                let k = bits.trailing_zeros() as usize;
                acc ^= v[k];
                bits &= bits - 1;
            }
            *x = acc;
        }
        Ok(())
    }

    pub fn point_into(&self, i: u64, out: &mut [f64]) -> Result<(), SeqError> {
        let mut bits = vec![0u32; out.len()];
        self.point_bits(i, &mut bits)?;
        for (x, b) in out.iter_mut().zip(bits) {
            *x = fraction(b);
        }
        Ok(())
    }
}

/// Converts a 32-bit binary fraction to a double (exact).
#[inline]
pub(crate) fn fraction(bits: u32) -> f64 {
    f64::from(bits) * (1.0 / 4_294_967_296.0)
}

/// Point `i` of the `dim`-dimensional Sobol' sequence.
pub fn sobol_point(i: u64, dim: usize, table: &DirectionTable) -> Result<Vec<f64>, SeqError> {
    let generator = SobolGenerator::new(dim, table)?;
    let mut out = vec![0.0; dim];
    generator.point_into(i, &mut out)?;
    Ok(out)
}
