//! Ground-truth classes and train/test roles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, SiteMapping};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Legit,
    Fake,
}

impl Class {
    pub fn as_str(self) -> &'static str {
        match self {
            Class::Legit => "legit",
            Class::Fake => "fake",
        }
    }

    pub fn parse(s: &str) -> Option<Class> {
        match s.trim().to_ascii_lowercase().as_str() {
            "legit" => Some(Class::Legit),
            "fake" => Some(Class::Fake),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Train,
    Test,
}

/// Per-node class and role. Built from site-level labels, so every page of a
/// site carries its site's class and role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedLabels {
    class: Vec<Option<Class>>,
    role: Vec<Option<Role>>,
}

impl SeedLabels {
    pub fn from_sites(
        sites: &SiteMapping,
        site_class: &[Option<Class>],
        site_role: &[Option<Role>],
    ) -> Result<Self> {
        if site_class.len() != sites.num_sites() {
            return Err(Error::LengthMismatch(site_class.len(), sites.num_sites()));
        }
        if site_role.len() != sites.num_sites() {
            return Err(Error::LengthMismatch(site_role.len(), sites.num_sites()));
        }
        let class = sites.sites().iter().map(|&s| site_class[s as usize]).collect();
        let role = sites.sites().iter().map(|&s| site_role[s as usize]).collect();
        Self::from_nodes(class, role)
    }

    /// Node-level construction. A node carries a role iff it carries a class.
    pub fn from_nodes(class: Vec<Option<Class>>, role: Vec<Option<Role>>) -> Result<Self> {
        if class.len() != role.len() {
            return Err(Error::LengthMismatch(class.len(), role.len()));
        }
        if let Some(v) = (0..class.len()).find(|&v| class[v].is_some() != role[v].is_some()) {
            return Err(Error::Config(format!(
                "node {v}: a role is required exactly on labeled nodes"
            )));
        }
        Ok(SeedLabels { class, role })
    }

    /// Every labeled node in the train role.
    pub fn all_train(class: Vec<Option<Class>>) -> Self {
        let role = class.iter().map(|c| c.map(|_| Role::Train)).collect();
        SeedLabels { class, role }
    }

    /// Copy that keeps only the labels of `role` nodes; everything else reads
    /// as unlabeled.
    pub fn restricted(&self, role: Role) -> SeedLabels {
        let keep = |v: usize| self.role[v] == Some(role);
        SeedLabels {
            class: (0..self.len()).map(|v| self.class[v].filter(|_| keep(v))).collect(),
            role: (0..self.len()).map(|v| self.role[v].filter(|_| keep(v))).collect(),
        }
    }

    pub fn labeled(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.class.len() as NodeId).filter(move |&v| self.class[v as usize].is_some())
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }

    #[inline]
    pub fn class(&self, v: NodeId) -> Option<Class> {
        self.class[v as usize]
    }

    #[inline]
    pub fn role(&self, v: NodeId) -> Option<Role> {
        self.role[v as usize]
    }

    /// Class of `v` if it plays the given role.
    #[inline]
    pub fn class_in(&self, v: NodeId, role: Role) -> Option<Class> {
        match self.role[v as usize] {
            Some(r) if r == role => self.class[v as usize],
            _ => None,
        }
    }

    pub fn nodes_in(&self, role: Role) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.class.len() as NodeId).filter(move |&v| self.role[v as usize] == Some(role))
    }

    pub fn classes(&self) -> &[Option<Class>] {
        &self.class
    }
}
