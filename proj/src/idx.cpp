#include <array>
#include <fstream>
#include <iterator>

#include "riccinet/data.hpp"
#include "riccinet/error.hpp"

namespace riccinet::data {

namespace {

using Kind = IdxParseError::Kind;

std::vector<std::uint8_t> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IdxParseError(Kind::Io, path, 0, "cannot open file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Reader {
 public:
  Reader(const std::string& path, const std::vector<std::uint8_t>& bytes)
      : path_(path), bytes_(bytes) {}

  std::uint32_t be32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[pos_++];
    return v;
  }

  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n)
      throw IdxParseError(Kind::Truncated, path_, bytes_.size(),
                          std::string("truncated while reading ") + what + " (need " +
                              std::to_string(n) + " bytes from offset " + std::to_string(pos_) +
                              ")");
  }

  std::size_t pos() const { return pos_; }

 private:
  const std::string& path_;
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

void check_magic(const std::string& path, std::uint32_t got, std::uint32_t want) {
  if (got != want) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "bad magic 0x%08x (expected 0x%08x)", got, want);
    throw IdxParseError(Kind::BadMagic, path, 0, buf);
  }
}

void put_be32(std::ofstream& out, std::uint32_t v) {
  const std::array<char, 4> b = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                                 static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b.data(), 4);
}

}  // namespace

IdxImages read_idx_images(const std::string& path) {
  const auto bytes = slurp(path);
  Reader r(path, bytes);
  check_magic(path, r.be32("magic"), kIdxImagesMagic);
  const std::uint32_t count = r.be32("image count");
  IdxImages out;
  out.rows = r.be32("row count");
  out.cols = r.be32("column count");
  const std::size_t payload = std::size_t{count} * out.rows * out.cols;
  r.need(payload, "pixel data");
  out.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(r.pos()),
                    bytes.begin() + static_cast<std::ptrdiff_t>(r.pos() + payload));
  return out;
}

std::vector<std::uint8_t> read_idx_labels(const std::string& path) {
  const auto bytes = slurp(path);
  Reader r(path, bytes);
  check_magic(path, r.be32("magic"), kIdxLabelsMagic);
  const std::uint32_t count = r.be32("label count");
  r.need(count, "label data");
  return {bytes.begin() + static_cast<std::ptrdiff_t>(r.pos()),
          bytes.begin() + static_cast<std::ptrdiff_t>(r.pos() + count)};
}

void write_idx_images(const std::string& path, const IdxImages& images) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IdxParseError(Kind::Io, path, 0, "cannot open file for writing");
  put_be32(out, kIdxImagesMagic);
  put_be32(out, static_cast<std::uint32_t>(images.count()));
  put_be32(out, images.rows);
  put_be32(out, images.cols);
  out.write(reinterpret_cast<const char*>(images.pixels.data()),
            static_cast<std::streamsize>(images.pixels.size()));
}

void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IdxParseError(Kind::Io, path, 0, "cannot open file for writing");
  put_be32(out, kIdxLabelsMagic);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
}

RawImageSet load_idx_pair(const std::string& images_path, const std::string& labels_path) {
  const IdxImages images = read_idx_images(images_path);
  const auto labels = read_idx_labels(labels_path);
  if (images.count() != labels.size())
    throw IdxParseError(Kind::CountMismatch, labels_path, 4,
                        "label count " + std::to_string(labels.size()) +
                            " does not match image count " + std::to_string(images.count()) +
                            " in " + images_path);
  const std::size_t n = images.count();
  const std::size_t features = std::size_t{images.rows} * images.cols;
  RawImageSet out;
  out.images.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(features));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t f = 0; f < features; ++f)
      out.images(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) =
          images.pixels[i * features + f] / 255.0;
  out.labels.assign(labels.begin(), labels.end());
  return out;
}

}  // namespace riccinet::data
