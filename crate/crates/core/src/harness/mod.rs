//! File formats, benchmark bundles, external tools and reports.

pub mod bundle;
pub mod edgelist;
pub mod external;
pub mod hgr;
pub mod partfile;
pub mod report;
