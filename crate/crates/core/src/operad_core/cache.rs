use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::exactalg::Scalar;
use crate::Error;

use super::classical::{classical_presentation, ClassicalOperad};
use super::cooperad::{koszul_dual_cooperad, KoszulDual};

type Slot = Arc<dyn Any + Send + Sync>;

fn store() -> &'static Mutex<HashMap<(TypeId, ClassicalOperad), (usize, Slot)>> {
    static STORE: OnceLock<Mutex<HashMap<(TypeId, ClassicalOperad), (usize, Slot)>>> = OnceLock::new();
    STORE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Koszul dual cooperad of a classical operad, computed once per field and reused by any request
/// for the same or a smaller arity bound.
pub fn classical_koszul_dual<F: Scalar>(kind: ClassicalOperad, max_arity: usize) -> Result<Arc<KoszulDual<F>>, Error> {
    let key = (TypeId::of::<F>(), kind);
    if let Some((arity, slot)) = store().lock().expect("cache").get(&key) {
        if *arity >= max_arity {
            return Ok(slot.clone().downcast::<KoszulDual<F>>().expect("cache entry type"));
        }
    }
    let dual = Arc::new(koszul_dual_cooperad(&classical_presentation::<F>(kind), max_arity)?);
    let mut guard = store().lock().expect("cache");
    let keep = guard.get(&key).map_or(true, |(a, _)| *a < max_arity);
    if keep {
        guard.insert(key, (max_arity, dual.clone() as Slot));
    }
    Ok(dual)
}
