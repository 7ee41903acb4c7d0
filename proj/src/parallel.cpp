#include "polsec/parallel.hpp"

#include <string>

namespace polsec {

int env_worker_count() {
  const char* env = std::getenv("POLSEC_WORKERS");
  if (!env) return 1;
  try {
    const int n = std::stoi(env);
    return n > 0 ? n : 1;
  } catch (...) {
    return 1;
  }
}

}  // namespace polsec
