#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emw/case_io.hpp"
#include "emw/error.hpp"

namespace emw {

namespace {

using Row = std::vector<double>;

struct Matrix {
  std::vector<Row> rows;
  std::vector<std::size_t> lines;  // source line of each row
};

std::size_t line_of(std::string_view text, std::size_t pos) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

// Replaces %-comments by spaces so that byte offsets stay valid.
std::string strip_comments(std::string_view text) {
  std::string out(text);
  bool in_quote = false;
  for (std::size_t i = 0; i < out.size(); ++i) {
    char ch = out[i];
    if (ch == '\n') {
      in_quote = false;
      continue;
    }
    if (ch == '\'') in_quote = !in_quote;
    if (ch == '%' && !in_quote) {
      while (i < out.size() && out[i] != '\n') out[i++] = ' ';
      --i;
    }
  }
  return out;
}

std::optional<std::size_t> find_assignment(const std::string& text, const std::string& name) {
  const std::string key = "mpc." + name;
  std::size_t pos = 0;
  while ((pos = text.find(key, pos)) != std::string::npos) {
    std::size_t p = pos + key.size();
    if (p < text.size() && (std::isalnum(static_cast<unsigned char>(text[p])) || text[p] == '_')) {
      pos = p;
      continue;
    }
    while (p < text.size() && std::isspace(static_cast<unsigned char>(text[p]))) ++p;
    if (p < text.size() && text[p] == '=') return p + 1;
    pos = p;
  }
  return std::nullopt;
}

std::optional<Matrix> read_matrix(const std::string& text, const std::string& name) {
  auto start = find_assignment(text, name);
  if (!start) return std::nullopt;
  std::size_t p = text.find('[', *start);
  if (p == std::string::npos) {
    throw ParseError("mpc." + name + ": expected '['", line_of(text, *start), 0);
  }
  std::size_t end = text.find(']', p);
  if (end == std::string::npos) {
    throw ParseError("mpc." + name + ": unterminated matrix", line_of(text, p), 0);
  }
  Matrix m;
  Row row;
  std::size_t row_line = line_of(text, p);
  auto flush = [&] {
    if (!row.empty()) {
      m.rows.push_back(std::move(row));
      m.lines.push_back(row_line);
      row.clear();
    }
  };
  std::size_t i = p + 1;
  std::size_t cur_line = row_line;
  while (i < end) {
    char ch = text[i];
    if (ch == ';' || ch == '\n') {
      flush();
      if (ch == '\n') ++cur_line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
      ++i;
      continue;
    }
    if (row.empty()) row_line = cur_line;
    const char* b = text.c_str() + i;
    char* e = nullptr;
    double v = std::strtod(b, &e);
    if (e == b) {
      throw ParseError("mpc." + name + " row " + std::to_string(m.rows.size() + 1) +
                           ": unexpected character '" + std::string(1, ch) + "'",
                       cur_line, 0);
    }
    row.push_back(v);
    i += static_cast<std::size_t>(e - b);
  }
  flush();
  return m;
}

std::optional<double> read_scalar(const std::string& text, const std::string& name) {
  auto start = find_assignment(text, name);
  if (!start) return std::nullopt;
  const char* b = text.c_str() + *start;
  char* e = nullptr;
  double v = std::strtod(b, &e);
  if (e == b) throw ParseError("mpc." + name + ": expected a number", line_of(text, *start), 0);
  return v;
}

void require_columns(const Matrix& m, const std::string& name, std::size_t min_cols) {
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    if (m.rows[r].size() < min_cols) {
      throw ParseError("mpc." + name + " row " + std::to_string(r + 1) + ": expected at least " +
                           std::to_string(min_cols) + " columns, found " +
                           std::to_string(m.rows[r].size()),
                       m.lines[r], 0);
    }
  }
}

int as_id(double v, const std::string& name, std::size_t row) {
  const int id = static_cast<int>(v);
  if (static_cast<double>(id) != v) {
    throw ParseError("mpc." + name + " row " + std::to_string(row + 1) + ": non-integer bus id", 0, 0);
  }
  return id;
}

}  // namespace

PowerCase parse_matpower(std::string_view raw, const MatpowerSidecar& side) {
  const std::string text = strip_comments(raw);

  auto base = read_scalar(text, "baseMVA");
  auto bus = read_matrix(text, "bus");
  auto gen = read_matrix(text, "gen");
  auto branch = read_matrix(text, "branch");
  if (!base) throw SchemaError("mpc.baseMVA", "missing");
  if (!bus) throw SchemaError("mpc.bus", "missing");
  if (!gen) throw SchemaError("mpc.gen", "missing");
  if (!branch) throw SchemaError("mpc.branch", "missing");
  require_columns(*bus, "bus", 13);
  require_columns(*gen, "gen", 10);
  require_columns(*branch, "branch", 11);

  PowerCase c;
  c.base_mva = *base;
  c.frequency_hz = side.frequency_hz;

  std::map<int, double> first_vg;
  for (std::size_t r = 0; r < gen->rows.size(); ++r) {
    const auto& g = gen->rows[r];
    if (g[7] > 0) first_vg.emplace(as_id(g[0], "gen", r), g[5]);
  }

  for (std::size_t r = 0; r < bus->rows.size(); ++r) {
    const auto& row = bus->rows[r];
    Bus b;
    b.id = as_id(row[0], "bus", r);
    const int type = static_cast<int>(row[1]);
    b.p_load = row[2];
    b.q_load = row[3];
    if (row[4] != 0.0 || row[5] != 0.0) {
      throw ParseError("mpc.bus row " + std::to_string(r + 1) + ": bus shunts (Gs/Bs) are not supported",
                       bus->lines[r], 0);
    }
    auto vg = first_vg.find(b.id);
    switch (type) {
      case 1:
        b.kind = BusKind::pq;
        b.v_set = row[7];
        break;
      case 2:
        b.kind = vg != first_vg.end() ? BusKind::pv : BusKind::pq;
        b.v_set = vg != first_vg.end() ? vg->second : row[7];
        break;
      case 3:
        b.kind = BusKind::slack;
        b.v_set = vg != first_vg.end() ? vg->second : row[7];
        break;
      default:
        throw ParseError("mpc.bus row " + std::to_string(r + 1) + ": unsupported bus type " +
                             std::to_string(type),
                         bus->lines[r], 0);
    }
    c.buses.push_back(b);
  }

  for (std::size_t r = 0; r < branch->rows.size(); ++r) {
    const auto& row = branch->rows[r];
    Line l;
    l.from_bus = as_id(row[0], "branch", r);
    l.to_bus = as_id(row[1], "branch", r);
    l.r = row[2];
    l.x = row[3];
    l.b_shunt = row[4];
    l.status = row[10] > 0 ? LineStatus::in_service : LineStatus::out;
    l.length_miles = l.x * side.default_length_per_x;
    if (!c.find_bus(l.from_bus) || !c.find_bus(l.to_bus)) {
      throw ReferenceError("mpc.branch row " + std::to_string(r + 1) + " references unknown bus " +
                           std::to_string(c.find_bus(l.from_bus) ? l.to_bus : l.from_bus));
    }
    c.lines.push_back(l);
  }
  for (const auto& [ref, miles] : side.lengths) {
    c.lines[c.line_index(ref)].length_miles = miles;
  }

  for (std::size_t r = 0; r < gen->rows.size(); ++r) {
    const auto& row = gen->rows[r];
    if (!(row[7] > 0)) continue;
    Generator g;
    g.bus = as_id(row[0], "gen", r);
    if (!c.find_bus(g.bus)) {
      throw ReferenceError("mpc.gen row " + std::to_string(r + 1) + " references unknown bus " +
                           std::to_string(g.bus));
    }
    g.p_gen = row[1];
    g.mva_rating = row[6];
    g.h_const = side.default_h_const;
    for (const auto& [b, data] : side.generators) {
      if (b == g.bus) {
        g.h_const = data.h_const;
        if (data.mva_rating > 0) g.mva_rating = data.mva_rating;
      }
    }
    c.generators.push_back(g);
  }

  finalize_derived(c);
  return c;
}

}  // namespace emw
