#ifndef SMASH_SERIALIZE_HPP
#define SMASH_SERIALIZE_HPP

#include <iosfwd>

#include "smash/hmatrix.hpp"

namespace smash {

/// Binary little-endian container: header with structure and scalar tags, tree
/// topology and permutations, build parameters, node bases (skeleton sets and G
/// blocks, or dense factors) and block lists. Lazy blocks are stored as node pairs.
template <typename Scalar>
void save(const HMatrix<Scalar>& h, std::ostream& os);

/// Reads a container written by save. Lazy blocks are re-evaluated through `kernel`,
/// which must describe the same points as the saved matrix.
template <typename Scalar>
HMatrix<Scalar> load(std::istream& is, std::shared_ptr<const Kernel<Scalar>> kernel = nullptr);

template <typename Scalar>
void save_file(const HMatrix<Scalar>& h, const std::string& path);
template <typename Scalar>
HMatrix<Scalar> load_file(const std::string& path, std::shared_ptr<const Kernel<Scalar>> kernel = nullptr);

struct ContainerInfo {
  Structure structure;
  bool complex_scalar;
};

/// Reads only the header tags.
ContainerInfo peek(std::istream& is);

}  // namespace smash

#endif
