use std::borrow::Borrow;
use std::fmt;
use std::sync::Arc;

use crate::PmError;

/// Label of a ground-set element: a nonempty string over `[A-Za-z0-9_]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(Arc<str>);

impl ElementId {
    pub fn new(label: &str) -> Result<Self, PmError> {
        if Self::is_valid(label) {
            Ok(ElementId(Arc::from(label)))
        } else {
            Err(PmError::InvalidLabel(label.to_string()))
        }
    }

    pub fn is_valid(label: &str) -> bool {
        !label.is_empty()
            && label
                .bytes()
                .all(|b| b.is_ascii_alphanumeric() || b == b'_')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for ElementId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for ElementId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl TryFrom<&str> for ElementId {
    type Error = PmError;

    fn try_from(value: &str) -> Result<Self, Self::Error> {
        ElementId::new(value)
    }
}

/// Joins labels with commas, the textual form used for subset keys.
pub(crate) fn join_labels(labels: &[ElementId]) -> String {
    labels
        .iter()
        .map(ElementId::as_str)
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_charset() {
        assert!(ElementId::new("x_1").is_ok());
        assert!(ElementId::new("A9").is_ok());
        assert!(ElementId::new("").is_err());
        assert!(ElementId::new("a,b").is_err());
        assert!(ElementId::new("p#1").is_err());
    }
}
