#include "moeope/models/dynamics_model.hpp"

namespace moeope {

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::parametric:
      return "parametric";
    case ModelKind::nonparametric:
      return "nonparametric";
  }
  return "unknown";
}

}  // namespace moeope
