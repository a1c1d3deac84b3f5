#include "gp3d/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gp3d {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

double parse_double(std::string_view tok, int line, int field) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("expected a number, got '" + std::string(tok) + "'", line, field);
  }
  if (!std::isfinite(v)) {
    throw ParseError("non-finite value '" + std::string(tok) + "'", line, field);
  }
  return v;
}

int parse_int(std::string_view tok, int line, int field) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("expected an integer, got '" + std::string(tok) + "'", line, field);
  }
  return v;
}

// Shortest decimal that round-trips exactly.
std::string fmt_shortest(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string fmt_fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

bool is_blank(std::string_view line) {
  return split_ws(line).empty();
}

}  // namespace

std::vector<LabelRecord> parse_labels(std::string_view text) {
  std::vector<LabelRecord> out;
  const auto lines = split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int line_no = static_cast<int>(li) + 1;
    if (is_blank(lines[li])) continue;
    const auto tok = split_ws(lines[li]);
    if (tok.size() < 15) {
      throw ParseError("label line has " + std::to_string(tok.size()) + " fields, expected 15",
                       line_no, static_cast<int>(tok.size()) + 1);
    }
    if (tok.size() > 15) {
      throw ParseError("trailing data after field 15", line_no, 16);
    }
    LabelRecord r;
    r.category = std::string(tok[0]);
    r.truncated = parse_double(tok[1], line_no, 2);
    r.occluded = parse_int(tok[2], line_no, 3);
    r.alpha = parse_double(tok[3], line_no, 4);
    r.left = parse_double(tok[4], line_no, 5);
    r.top = parse_double(tok[5], line_no, 6);
    r.right = parse_double(tok[6], line_no, 7);
    r.bottom = parse_double(tok[7], line_no, 8);
    r.h = parse_double(tok[8], line_no, 9);
    r.w = parse_double(tok[9], line_no, 10);
    r.l = parse_double(tok[10], line_no, 11);
    r.x = parse_double(tok[11], line_no, 12);
    r.y = parse_double(tok[12], line_no, 13);
    r.z = parse_double(tok[13], line_no, 14);
    r.rotation_y = parse_double(tok[14], line_no, 15);
    if (r.right < r.left) throw ParseError("2-D box has right < left", line_no, 7);
    if (r.bottom < r.top) throw ParseError("2-D box has bottom < top", line_no, 8);
    if (r.h < 0) throw ParseError("negative box height", line_no, 9);
    if (r.w < 0) throw ParseError("negative box width", line_no, 10);
    if (r.l < 0) throw ParseError("negative box length", line_no, 11);
    out.push_back(std::move(r));
  }
  return out;
}

std::string emit_labels(std::span<const LabelRecord> records) {
  std::string out;
  for (const LabelRecord& r : records) {
    out += r.category;
    out += ' ' + fmt_shortest(r.truncated);
    out += ' ' + std::to_string(r.occluded);
    for (double v : {r.alpha, r.left, r.top, r.right, r.bottom, r.h, r.w, r.l, r.x, r.y, r.z,
                     r.rotation_y}) {
      out += ' ' + fmt_shortest(v);
    }
    out += '\n';
  }
  return out;
}

CalibRecord parse_calib(std::string_view text) {
  const auto lines = split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int line_no = static_cast<int>(li) + 1;
    const auto tok = split_ws(lines[li]);
    if (tok.empty()) continue;
    if (tok[0] != "P2:" && tok[0] != "P2") continue;
    if (tok.size() != 13) {
      throw ParseError("P2 needs 12 numbers, got " + std::to_string(tok.size() - 1), line_no,
                       static_cast<int>(std::min<std::size_t>(tok.size(), 13)) + 1);
    }
    CalibRecord calib;
    for (int i = 0; i < 12; ++i) {
      calib.p2[i] = parse_double(tok[i + 1], line_no, i + 2);
    }
    const CameraIntrinsics k = calib.intrinsics();
    if (!(k.fx > 0) || !(k.fy > 0)) {
      throw ParseError("P2 has non-positive focal length", line_no, k.fx > 0 ? 7 : 2);
    }
    return calib;
  }
  throw MissingP2("calibration text has no P2 line");
}

std::string emit_calib(const CalibRecord& calib) {
  std::string out = "P2:";
  for (double v : calib.p2) out += ' ' + fmt_shortest(v);
  out += '\n';
  return out;
}

std::string emit_pseudo_labels(std::span<const PseudoLabelFrame> frames) {
  std::string out;
  for (const PseudoLabelFrame& frame : frames) {
    for (const ContactPointSet& obj : frame.objects) {
      out += frame.frame_id;
      switch (obj.category) {
        case Category::Car: out += " Car"; break;
        case Category::Pedestrian: out += " Pedestrian"; break;
        case Category::Cyclist: out += " Cyclist"; break;
      }
      out += ' ' + std::to_string(obj.points.size());
      for (const ContactPixel& p : obj.points) {
        out += ' ';
        out += to_string(p.tag);
        out += ' ' + fmt_fixed6(p.px.u) + ' ' + fmt_fixed6(p.px.v);
      }
      out += '\n';
    }
    out += frame.frame_id + " HL " + fmt_fixed6(frame.horizon.k) + ' ' +
           fmt_fixed6(frame.horizon.b) + '\n';
  }
  return out;
}

std::vector<PseudoLabelFrame> parse_pseudo_labels(std::string_view text) {
  std::vector<PseudoLabelFrame> frames;
  PseudoLabelFrame current;
  bool open = false;

  const auto lines = split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int line_no = static_cast<int>(li) + 1;
    if (is_blank(lines[li])) continue;
    const auto tok = split_ws(lines[li]);
    if (tok.size() < 2) throw ParseError("incomplete line", line_no, 2);
    const std::string frame_id(tok[0]);
    if (open && frame_id != current.frame_id) {
      throw ParseError("frame '" + current.frame_id + "' has no HL line", line_no, 1);
    }
    if (!open) {
      current = PseudoLabelFrame{};
      current.frame_id = frame_id;
      open = true;
    }

    if (tok[1] == "HL") {
      if (tok.size() != 4) throw ParseError("HL line needs 'HL k b'", line_no, 5);
      current.horizon.k = parse_double(tok[2], line_no, 3);
      current.horizon.b = parse_double(tok[3], line_no, 4);
      frames.push_back(std::move(current));
      open = false;
      continue;
    }

    ContactPointSet obj;
    if (tok[1] == "Car") obj.category = Category::Car;
    else if (tok[1] == "Pedestrian") obj.category = Category::Pedestrian;
    else if (tok[1] == "Cyclist") obj.category = Category::Cyclist;
    else throw ParseError("unknown category '" + std::string(tok[1]) + "'", line_no, 2);

    if (tok.size() < 3) throw ParseError("missing point count", line_no, 3);
    const int count = parse_int(tok[2], line_no, 3);
    if (count != 2 && count != 4) {
      throw ParseError("point count must be 2 or 4, got " + std::to_string(count), line_no, 3);
    }
    const std::size_t expected = 3 + static_cast<std::size_t>(count) * 3;
    if (tok.size() != expected) {
      throw ParseError("expected " + std::to_string(expected) + " fields for " +
                       std::to_string(count) + " points, got " + std::to_string(tok.size()),
                       line_no, static_cast<int>(std::min(tok.size(), expected)) + 1);
    }
    for (int p = 0; p < count; ++p) {
      const int base = 3 + p * 3;
      ContactPixel cp;
      const auto tag = contact_tag_from_string(tok[base]);
      if (!tag) {
        throw ParseError("unknown contact tag '" + std::string(tok[base]) + "'", line_no,
                         base + 1);
      }
      cp.tag = *tag;
      cp.px.u = parse_double(tok[base + 1], line_no, base + 2);
      cp.px.v = parse_double(tok[base + 2], line_no, base + 3);
      obj.points.push_back(cp);
    }
    current.objects.push_back(std::move(obj));
  }
  if (open) {
    throw ParseError("frame '" + current.frame_id + "' has no HL line",
                     static_cast<int>(lines.size()), 1);
  }
  return frames;
}

namespace {

struct PbmReader {
  std::span<const unsigned char> bytes;
  std::size_t pos = 0;

  bool eof() const { return pos >= bytes.size(); }
  unsigned char peek() const { return bytes[pos]; }

  void skip_ws_and_comments() {
    while (!eof()) {
      const unsigned char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos;
      } else {
        break;
      }
    }
  }

  int read_int() {
    skip_ws_and_comments();
    if (eof() || peek() < '0' || peek() > '9') {
      throw UnsupportedFormat("malformed Netpbm header");
    }
    long v = 0;
    while (!eof() && peek() >= '0' && peek() <= '9') {
      v = v * 10 + (peek() - '0');
      if (v > 1 << 30) throw UnsupportedFormat("Netpbm header value out of range");
      ++pos;
    }
    return static_cast<int>(v);
  }
};

}  // namespace

GrayImage load_netpbm(std::span<const unsigned char> bytes) {
  if (bytes.size() < 2) throw UnsupportedFormat("not a Netpbm file");
  const bool p5 = bytes[0] == 'P' && bytes[1] == '5';
  const bool p6 = bytes[0] == 'P' && bytes[1] == '6';
  if (!p5 && !p6) {
    throw UnsupportedFormat("unsupported magic '" +
                            std::string(reinterpret_cast<const char*>(bytes.data()),
                                        std::min<std::size_t>(2, bytes.size())) +
                            "', expected P5 or P6");
  }
  PbmReader r{bytes, 2};
  const int width = r.read_int();
  const int height = r.read_int();
  const int maxval = r.read_int();
  if (width < 1 || height < 1) throw UnsupportedFormat("invalid Netpbm dimensions");
  if (maxval != 255) {
    throw UnsupportedFormat("maxval must be 255, got " + std::to_string(maxval));
  }
  // Exactly one whitespace byte separates the header from the payload.
  if (r.eof() || !(r.peek() == ' ' || r.peek() == '\t' || r.peek() == '\r' || r.peek() == '\n')) {
    throw UnsupportedFormat("missing whitespace before Netpbm payload");
  }
  ++r.pos;

  const std::size_t pixels = static_cast<std::size_t>(width) * height;
  const std::size_t need = p5 ? pixels : pixels * 3;
  if (bytes.size() - r.pos < need) {
    throw TruncatedPayload("Netpbm payload has " + std::to_string(bytes.size() - r.pos) +
                           " bytes, expected " + std::to_string(need));
  }
  if (bytes.size() - r.pos > need) {
    throw ParseError("trailing bytes after Netpbm payload", 0, 0);
  }

  GrayImage img(width, height);
  if (p5) {
    std::copy(bytes.begin() + r.pos, bytes.begin() + r.pos + need, img.data.begin());
  } else {
    for (std::size_t i = 0; i < pixels; ++i) {
      const double red = bytes[r.pos + i * 3];
      const double green = bytes[r.pos + i * 3 + 1];
      const double blue = bytes[r.pos + i * 3 + 2];
      const double luma = 0.299 * red + 0.587 * green + 0.114 * blue;
      img.data[i] = static_cast<std::uint8_t>(std::floor(luma + 0.5));
    }
  }
  return img;
}

GrayImage load_netpbm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string buf = ss.str();
  return load_netpbm({reinterpret_cast<const unsigned char*>(buf.data()), buf.size()});
}

std::string save_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(img.data.data()), img.data.size());
  return out;
}

}  // namespace gp3d
