//! Binary graph bundle: a parsed graph, its site mapping and optional site
//! labels, so large edge lists are parsed once.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic      b"LSPB"
//! version    u32
//! n, m       u64, u64
//! offsets    (n + 1) x u64      forward CSR
//! targets    m x u32
//! sites      u64 count, then n x u32 site ids
//! names      per site: u32 byte length + UTF-8 bytes
//! labels     u8 present flag; if set, one byte per site (0 none, 1 legit, 2 fake)
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{SiteMapping, WebGraph};
use crate::labels::Class;

pub const MAGIC: &[u8; 4] = b"LSPB";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct GraphBundle {
    pub graph: WebGraph,
    pub sites: SiteMapping,
    pub site_class: Option<Vec<Option<Class>>>,
}

impl GraphBundle {
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let (offsets, targets) = self.graph.raw_forward();
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(self.graph.num_nodes() as u64).to_le_bytes())?;
        w.write_all(&(self.graph.num_edges() as u64).to_le_bytes())?;
        for &o in offsets {
            w.write_all(&(o as u64).to_le_bytes())?;
        }
        for &t in targets {
            w.write_all(&t.to_le_bytes())?;
        }
        w.write_all(&(self.sites.num_sites() as u64).to_le_bytes())?;
        for &s in self.sites.sites() {
            w.write_all(&s.to_le_bytes())?;
        }
        for name in self.sites.names() {
            w.write_all(&(name.len() as u32).to_le_bytes())?;
            w.write_all(name.as_bytes())?;
        }
        match &self.site_class {
            None => w.write_all(&[0])?,
            Some(classes) => {
                w.write_all(&[1])?;
                let bytes: Vec<u8> = classes
                    .iter()
                    .map(|c| match c {
                        None => 0,
                        Some(Class::Legit) => 1,
                        Some(Class::Fake) => 2,
                    })
                    .collect();
                w.write_all(&bytes)?;
            }
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<GraphBundle> {
        let mut magic = [0u8; 4];
        read_exact(&mut r, &mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Bundle("not a graph bundle (bad magic)".into()));
        }
        let version = read_u32(&mut r)?;
        if version > VERSION {
            return Err(Error::Bundle(format!(
                "bundle version {version} is newer than supported version {VERSION}"
            )));
        }
        if version == 0 {
            return Err(Error::Bundle("bundle version 0 is invalid".into()));
        }
        let n = read_len(&mut r)?;
        let m = read_len(&mut r)?;
        let offsets = (0..=n).map(|_| read_len(&mut r)).collect::<Result<Vec<_>>>()?;
        let targets = read_u32s(&mut r, m)?;
        let graph = WebGraph::from_raw_forward(offsets, targets)?;

        let site_count = read_len(&mut r)?;
        let site_of = read_u32s(&mut r, n)?;
        let mut names = Vec::with_capacity(site_count.min(1 << 24));
        for _ in 0..site_count {
            let len = read_u32(&mut r)? as usize;
            let mut buf = vec![0u8; len];
            read_exact(&mut r, &mut buf)?;
            names.push(String::from_utf8(buf).map_err(|_| Error::Bundle("site name is not UTF-8".into()))?);
        }
        let sites = SiteMapping::new(site_of, names).map_err(|e| Error::Bundle(e.to_string()))?;

        let mut flag = [0u8; 1];
        read_exact(&mut r, &mut flag)?;
        let site_class = match flag[0] {
            0 => None,
            1 => {
                let mut bytes = vec![0u8; site_count];
                read_exact(&mut r, &mut bytes)?;
                Some(
                    bytes
                        .into_iter()
                        .map(|b| match b {
                            0 => Ok(None),
                            1 => Ok(Some(Class::Legit)),
                            2 => Ok(Some(Class::Fake)),
                            _ => Err(Error::Bundle(format!("bad label byte {b}"))),
                        })
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            b => return Err(Error::Bundle(format!("bad label flag {b}"))),
        };
        let mut rest = [0u8; 1];
        if r.read(&mut rest).map_err(|e| Error::Bundle(e.to_string()))? != 0 {
            return Err(Error::Bundle("trailing bytes".into()));
        }
        Ok(GraphBundle {
            graph,
            sites,
            site_class,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::with_capacity(1 << 20, f);
        self.write_to(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<GraphBundle> {
        let f = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(BufReader::with_capacity(1 << 20, f))
    }
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf)
        .map_err(|e| Error::Bundle(format!("truncated bundle: {e}")))
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_len<R: Read>(r: &mut R) -> Result<usize> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    usize::try_from(u64::from_le_bytes(b)).map_err(|_| Error::Bundle("length overflow".into()))
}

fn read_u32s<R: Read>(r: &mut R, count: usize) -> Result<Vec<u32>> {
    let mut bytes = vec![0u8; count.checked_mul(4).ok_or_else(|| Error::Bundle("length overflow".into()))?];
    read_exact(r, &mut bytes)?;
    Ok(bytes
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect())
}
