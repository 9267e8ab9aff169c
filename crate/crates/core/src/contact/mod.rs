//! Bridge to contact Riemannian geometry: the metric extension of a
//! structure along a chosen contact form, the `(1,1)`-tensor it induces,
//! and the pointwise existence test for an associated form.

mod associated;
mod metric;

pub use associated::{
    check_associated, search_associated_form, AssociatedExistence, AssociatedPointCheck,
    AssociatedVerdict, ExistencePoint,
};
pub use metric::{build_contact_metric, ContactMetricData};
