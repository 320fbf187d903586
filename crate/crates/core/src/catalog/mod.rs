//! Built-in example models and the named registry over them.

mod models;
mod registry;

pub use models::*;
pub use registry::{
    catalog_get, catalog_list, catalog_model, catalog_sweep, expected_flags, parse_params,
    twist_instance, CatalogEntry, CatalogItem, Flag, ParamInfo, Params,
};
