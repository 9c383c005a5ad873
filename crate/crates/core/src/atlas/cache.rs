//! On-disk atlas format.
//!
//! All integers are little-endian. Layout:
//!
//! ```text
//! magic            8 bytes  "RDATLAS\0"
//! version          u32      FORMAT_VERSION
//! group digest     32 bytes
//! subgroup digest  32 bytes
//! radius           u32
//! valid_core       u32
//! exact            u8       1 when distances come from a formula
//! generators       u32
//! count            u64
//! elements         count × (u8 length, bytes), sorted by id
//! word lengths     count × u32
//! parents          count × (u32 parent id, u8 generator)
//! neighbors        count × generators × u32   (0xffffffff = outside)
//! dist_to_H        count × u32
//! checksum         32 bytes SHA-256 of everything above
//! ```

use std::path::Path;

use sha2::{Digest, Sha256};

use super::{AnnotatedBall, BallIndex};
use crate::error::{Error, Result};
use crate::group::Element;

pub const MAGIC: &[u8; 8] = b"RDATLAS\0";
pub const FORMAT_VERSION: u32 = 1;

/// Identifies the group and subgroup an atlas was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasHeader {
    pub group_digest: [u8; 32],
    pub subgroup_digest: [u8; 32],
}

impl AtlasHeader {
    /// From hex digests as produced by the config module.
    pub fn from_hex(group: &str, subgroup: &str) -> Result<Self> {
        let parse = |s: &str| -> Result<[u8; 32]> {
            let v = hex::decode(s).map_err(|e| Error::invalid(format!("bad digest: {e}")))?;
            v.try_into().map_err(|_| Error::invalid("digest must be 32 bytes"))
        };
        Ok(Self {
            group_digest: parse(group)?,
            subgroup_digest: parse(subgroup)?,
        })
    }
}

pub fn serialize(aball: &AnnotatedBall, header: &AtlasHeader) -> Vec<u8> {
    let ball = &aball.base;
    let n = ball.element_count();
    let mut out = Vec::with_capacity(n * (24 + 4 * ball.generator_count()));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&header.group_digest);
    out.extend_from_slice(&header.subgroup_digest);
    out.extend_from_slice(&ball.radius().to_le_bytes());
    out.extend_from_slice(&aball.valid_core().to_le_bytes());
    out.push(aball.is_exact() as u8);
    out.extend_from_slice(&(ball.generator_count() as u32).to_le_bytes());
    out.extend_from_slice(&(n as u64).to_le_bytes());
    for x in ball.elements() {
        let bytes = x.as_bytes();
        out.push(u8::try_from(bytes.len()).expect("element encoding longer than 255 bytes"));
        out.extend_from_slice(bytes);
    }
    for &l in ball.word_lengths() {
        out.extend_from_slice(&l.to_le_bytes());
    }
    let (parents, gens) = ball.parents();
    for (p, g) in parents.iter().zip(gens) {
        out.extend_from_slice(&p.to_le_bytes());
        out.push(*g);
    }
    for &v in ball.neighbor_table() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for &d in aball.dists() {
        out.extend_from_slice(&d.to_le_bytes());
    }
    let sum = Sha256::digest(&out);
    out.extend_from_slice(&sum);
    out
}

pub fn save_ball(aball: &AnnotatedBall, header: &AtlasHeader, path: &Path) -> Result<()> {
    let bytes = serialize(aball, header);
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
    path: &'a Path,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.at + n > self.bytes.len() {
            return Err(Error::AtlasFormat {
                path: self.path.to_path_buf(),
                reason: "truncated file".into(),
            });
        }
        let s = &self.bytes[self.at..self.at + n];
        self.at += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn digest(&mut self) -> Result<[u8; 32]> {
        Ok(self.take(32)?.try_into().expect("32 bytes"))
    }
}

/// Parses an atlas, checking magic, version and checksum in that order.
pub fn deserialize(bytes: &[u8], path: &Path) -> Result<(AnnotatedBall, AtlasHeader)> {
    let format_err = |reason: &str| Error::AtlasFormat {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };
    if bytes.len() < 12 || &bytes[..8] != MAGIC {
        return Err(format_err("not an atlas file"));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes"));
    if version != FORMAT_VERSION {
        return Err(Error::AtlasVersion {
            path: path.to_path_buf(),
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    if bytes.len() < 12 + 32 {
        return Err(format_err("truncated file"));
    }
    let (body, sum) = bytes.split_at(bytes.len() - 32);
    if Sha256::digest(body).as_slice() != sum {
        return Err(Error::AtlasChecksum {
            path: path.to_path_buf(),
        });
    }
    let mut r = Reader {
        bytes: body,
        at: 12,
        path,
    };
    let header = AtlasHeader {
        group_digest: r.digest()?,
        subgroup_digest: r.digest()?,
    };
    let radius = r.u32()?;
    let core = r.u32()?;
    let exact = r.u8()? != 0;
    let n_gens = r.u32()? as usize;
    let n = usize::try_from(r.u64()?).map_err(|_| format_err("element count too large"))?;
    let mut elements = Vec::with_capacity(n);
    for _ in 0..n {
        let len = r.u8()? as usize;
        elements.push(Element::from_bytes(r.take(len)?));
    }
    let mut word_length = Vec::with_capacity(n);
    for _ in 0..n {
        word_length.push(r.u32()?);
    }
    let mut parent = Vec::with_capacity(n);
    let mut parent_gen = Vec::with_capacity(n);
    for _ in 0..n {
        parent.push(r.u32()?);
        parent_gen.push(r.u8()?);
    }
    let mut neighbors = Vec::with_capacity(n * n_gens);
    for _ in 0..n * n_gens {
        neighbors.push(r.u32()?);
    }
    let mut dist = Vec::with_capacity(n);
    for _ in 0..n {
        dist.push(r.u32()?);
    }
    if r.at != body.len() {
        return Err(format_err("trailing bytes"));
    }
    let ball = BallIndex::from_parts(radius, n_gens, elements, word_length, parent, parent_gen, neighbors)
        .map_err(|e| format_err(&e.to_string()))?;
    let aball = AnnotatedBall::from_parts(ball, dist, core, exact).map_err(|e| format_err(&e.to_string()))?;
    Ok((aball, header))
}

pub fn load_ball(path: &Path) -> Result<(AnnotatedBall, AtlasHeader)> {
    let bytes = std::fs::read(path)?;
    deserialize(&bytes, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::annotated_ball;
    use crate::group::zd::ZdGroup;
    use crate::group::GroupOracle;
    use crate::subgroup::SubgroupSpec;

    fn z2_atlas() -> AnnotatedBall {
        let z = ZdGroup::<i64>::new(2).unwrap();
        let spec = SubgroupSpec::new(&z, vec![z.parse_word("a").unwrap()], None).unwrap();
        annotated_ball(&z, &spec, 6, 10_000).unwrap()
    }

    fn header() -> AtlasHeader {
        AtlasHeader {
            group_digest: [1; 32],
            subgroup_digest: [2; 32],
        }
    }

    #[test]
    fn roundtrip_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("z2.atlas");
        let ab = z2_atlas();
        save_ball(&ab, &header(), &path).unwrap();
        let (back, h) = load_ball(&path).unwrap();
        assert_eq!(h, header());
        assert_eq!(serialize(&back, &h), std::fs::read(&path).unwrap());
        assert_eq!(back.valid_core(), 3);
        assert_eq!(back.base.lookup(ab.base.element(17)), Some(17));
    }

    #[test]
    fn flipped_checksum_is_detected() {
        let mut bytes = serialize(&z2_atlas(), &header());
        let last = bytes.len() - 1;
        bytes[last] ^= 0xff;
        assert!(matches!(
            deserialize(&bytes, Path::new("x")),
            Err(Error::AtlasChecksum { .. })
        ));
        let mut body_flip = serialize(&z2_atlas(), &header());
        body_flip[100] ^= 1;
        assert!(matches!(
            deserialize(&body_flip, Path::new("x")),
            Err(Error::AtlasChecksum { .. })
        ));
    }

    #[test]
    fn old_version_is_rejected() {
        let mut bytes = serialize(&z2_atlas(), &header());
        bytes[8..12].copy_from_slice(&0u32.to_le_bytes());
        assert!(matches!(
            deserialize(&bytes, Path::new("x")),
            Err(Error::AtlasVersion {
                found: 0,
                expected: 1,
                ..
            })
        ));
        assert!(matches!(
            deserialize(b"garbage!", Path::new("x")),
            Err(Error::AtlasFormat { .. })
        ));
    }
}
