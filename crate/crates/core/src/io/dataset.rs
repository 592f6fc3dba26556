//! Benchmark dataset directories.
//!
//! Layout: one folder per family under a root, one file per instance (BWMV
//! class files may hold several), and an optional `manifest.json`:
//!
//! ```json
//! { "families": [ { "family": "C", "dir": "C", "instance_count": 21, "zero_waste": true } ] }
//! ```
//!
//! Without a manifest the standard family folder names are scanned.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{parse_instances, Format};
use crate::instance::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "C")]
    C,
    #[serde(rename = "N")]
    N,
    #[serde(rename = "NT-N")]
    NtN,
    #[serde(rename = "NT-T")]
    NtT,
    #[serde(rename = "KR")]
    Kr,
    #[serde(rename = "BWMV")]
    Bwmv,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::C, Family::N, Family::NtN, Family::NtT, Family::Kr, Family::Bwmv];

    pub fn name(self) -> &'static str {
        match self {
            Family::C => "C",
            Family::N => "N",
            Family::NtN => "NT-N",
            Family::NtT => "NT-T",
            Family::Kr => "KR",
            Family::Bwmv => "BWMV",
        }
    }

    /// Number of instances in the published set. The two NT sets share 70
    /// instances between them.
    pub fn expected_count(self) -> usize {
        match self {
            Family::C => 21,
            Family::N => 13,
            Family::NtN | Family::NtT => 35,
            Family::Kr => 12,
            Family::Bwmv => 500,
        }
    }

    /// Families built by cutting a full rectangle, so the optimal gap is zero.
    pub fn zero_waste(self) -> bool {
        matches!(self, Family::C | Family::N | Family::NtN | Family::NtT)
    }

    pub fn default_format(self) -> Format {
        match self {
            Family::Bwmv => Format::Bwmv,
            _ => Format::Auto,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_uppercase().replace('_', "-");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == norm || f.name().replace('-', "") == norm)
            .ok_or_else(|| format!("unknown dataset family `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub family: Family,
    pub dir: String,
    pub instance_count: usize,
    pub zero_waste: bool,
}

impl FamilyEntry {
    pub fn standard(family: Family) -> Self {
        FamilyEntry {
            family,
            dir: family.name().to_string(),
            instance_count: family.expected_count(),
            zero_waste: family.zero_waste(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub families: Vec<FamilyEntry>,
}

impl Default for DatasetManifest {
    fn default() -> Self {
        DatasetManifest {
            families: Family::ALL.into_iter().map(FamilyEntry::standard).collect(),
        }
    }
}

impl DatasetManifest {
    pub const FILE: &'static str = "manifest.json";

    /// Reads `root/manifest.json`, or the standard manifest when absent.
    pub fn load(root: &Path) -> std::io::Result<Self> {
        let path = root.join(Self::FILE);
        if !path.exists() {
            return Ok(Self::default());
        }
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }

    pub fn save(&self, root: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        fs::write(root.join(Self::FILE), text + "\n")
    }
}

/// One ingested instance, or a file that failed to parse.
#[derive(Debug, Clone)]
pub struct DatasetEntry {
    pub family: Family,
    pub path: PathBuf,
    /// SHA-256 of the source file.
    pub checksum: String,
    pub instance: Result<Instance, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Ingests every family folder present under `root`, in manifest order
/// and sorted file order. Folders that do not exist are skipped.
pub fn load_dataset(root: &Path) -> std::io::Result<(DatasetManifest, Vec<DatasetEntry>)> {
    let manifest = DatasetManifest::load(root)?;
    let mut entries = Vec::new();
    for fam in &manifest.families {
        let dir = root.join(&fam.dir);
        if !dir.is_dir() {
            continue;
        }
        let mut files: Vec<PathBuf> = fs::read_dir(&dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && !p.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.')))
            .collect();
        files.sort();
        for path in files {
            let bytes = fs::read(&path)?;
            let checksum = sha256_hex(&bytes);
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let parsed = std::str::from_utf8(&bytes)
                .map_err(|e| e.to_string())
                .and_then(|text| parse_instances(text, fam.family.default_format(), &name).map_err(|e| e.to_string()));
            match parsed {
                Ok(instances) => entries.extend(instances.into_iter().map(|inst| DatasetEntry {
                    family: fam.family,
                    path: path.clone(),
                    checksum: checksum.clone(),
                    instance: Ok(inst),
                })),
                Err(e) => entries.push(DatasetEntry {
                    family: fam.family,
                    path,
                    checksum,
                    instance: Err(e),
                }),
            }
        }
    }
    Ok((manifest, entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert_eq!("ntn".parse::<Family>().unwrap(), Family::NtN);
        assert!("XYZ".parse::<Family>().is_err());
    }

    #[test]
    fn standard_counts() {
        let total: usize = Family::ALL.iter().map(|f| f.expected_count()).sum();
        assert_eq!(total, 21 + 13 + 70 + 12 + 500);
        assert!(Family::C.zero_waste());
        assert!(!Family::Kr.zero_waste());
    }

    #[test]
    fn checksum_is_sha256() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn loads_folders_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir(dir.path().join("C")).unwrap();
        fs::write(dir.path().join("C/c1.txt"), "2\n4 4\n4 2\n4 2\n").unwrap();
        fs::write(dir.path().join("C/bad.txt"), "x\n").unwrap();
        let (manifest, entries) = load_dataset(dir.path()).unwrap();
        assert_eq!(manifest, DatasetManifest::default());
        assert_eq!(entries.len(), 2);
        assert!(entries[0].instance.is_err());
        assert_eq!(entries[1].instance.as_ref().unwrap().total_area(), 16);

        manifest.save(dir.path()).unwrap();
        assert_eq!(DatasetManifest::load(dir.path()).unwrap(), manifest);
    }
}
