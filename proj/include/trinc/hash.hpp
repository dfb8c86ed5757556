#ifndef TRINC_HASH_HPP
#define TRINC_HASH_HPP

#include <string>
#include <string_view>

namespace trinc {

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

}  // namespace trinc

#endif  // TRINC_HASH_HPP
