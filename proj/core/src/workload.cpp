#include "viewsel/workload.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>
#include <stdexcept>

#include "viewsel/errors.hpp"

namespace viewsel {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

enum class TokenKind { ident, number, string, symbol, end };

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;  // identifiers are lowercased; strings are unquoted
  std::size_t position = 0;
};

std::vector<Token> tokenize(std::string_view sql) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < sql.size()) {
    char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < sql.size() && sql[i + 1] == '-') {
      while (i < sql.size() && sql[i] != '\n') ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_ident_start(c)) {
      while (i < sql.size() && is_ident_char(sql[i])) ++i;
      tokens.push_back({TokenKind::ident, lower(sql.substr(start, i - start)), start});
      continue;
    }
    const bool signed_number = c == '-' && i + 1 < sql.size() &&
                               (std::isdigit(static_cast<unsigned char>(sql[i + 1])) ||
                                sql[i + 1] == '.');
    if (std::isdigit(static_cast<unsigned char>(c)) || signed_number ||
        (c == '.' && i + 1 < sql.size() && std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      ++i;
      while (i < sql.size() &&
             (std::isdigit(static_cast<unsigned char>(sql[i])) || sql[i] == '.' ||
              sql[i] == 'e' || sql[i] == 'E' ||
              ((sql[i] == '-' || sql[i] == '+') && (sql[i - 1] == 'e' || sql[i - 1] == 'E')))) {
        ++i;
      }
      tokens.push_back({TokenKind::number, std::string(sql.substr(start, i - start)), start});
      continue;
    }
    if (c == '\'') {
      std::string value;
      ++i;
      bool closed = false;
      while (i < sql.size()) {
        if (sql[i] == '\'') {
          if (i + 1 < sql.size() && sql[i + 1] == '\'') {
            value.push_back('\'');
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        value.push_back(sql[i++]);
      }
      if (!closed) throw ParseError("unterminated string literal", start);
      tokens.push_back({TokenKind::string, std::move(value), start});
      continue;
    }
    if ((c == '<' || c == '>' || c == '!') && i + 1 < sql.size() &&
        (sql[i + 1] == '=' || (c == '<' && sql[i + 1] == '>'))) {
      tokens.push_back({TokenKind::symbol, std::string(sql.substr(i, 2)), start});
      i += 2;
      continue;
    }
    if (std::string_view("(),;.=<>*").find(c) != std::string_view::npos) {
      tokens.push_back({TokenKind::symbol, std::string(1, c), start});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }
  tokens.push_back({TokenKind::end, "", sql.size()});
  return tokens;
}

Literal parse_number(const Token& token) {
  const std::string& text = token.text;
  const bool is_integer = text.find_first_of(".eE") == std::string::npos;
  if (is_integer) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size()) return value;
  } else {
    try {
      std::size_t used = 0;
      double value = std::stod(text, &used);
      if (used == text.size()) return value;
    } catch (const std::exception&) {
    }
  }
  throw ParseError("malformed number '" + text + "'", token.position);
}

std::optional<AggregateOp> aggregate_from(std::string_view name) {
  if (name == "sum") return AggregateOp::sum;
  if (name == "count") return AggregateOp::count;
  if (name == "min") return AggregateOp::min;
  if (name == "max") return AggregateOp::max;
  if (name == "avg") return AggregateOp::avg;
  return std::nullopt;
}

bool is_unsupported_keyword(std::string_view word) {
  static const std::set<std::string, std::less<>> words = {
      "or",    "having", "order", "join",     "left",  "right", "outer",
      "inner", "on",     "not",   "in",       "like",  "union", "distinct",
      "limit", "exists", "as",    "intersect", "except", "full", "cross",
      "is",    "null",   "case",  "with"};
  return words.contains(word);
}

bool is_clause_keyword(std::string_view word) {
  return word == "select" || word == "from" || word == "where" || word == "group" ||
         word == "by" || word == "and" || word == "between";
}

class Parser {
 public:
  Parser(std::string_view sql, std::string_view fact_table, std::size_t id)
      : tokens_(tokenize(sql)), fact_table_(lower(fact_table)) {
    query_.id = id;
  }

  ParsedQuery run() {
    expect_keyword("select");
    parse_select_list();
    expect_keyword("from");
    parse_from_list();
    if (accept_keyword("where")) parse_where();
    if (accept_keyword("group")) {
      expect_keyword("by");
      parse_group_by();
    }
    accept_symbol(";");
    if (peek().kind != TokenKind::end) fail_unexpected("end of statement");
    validate();
    return std::move(query_);
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail_unexpected(std::string_view expected) const {
    const Token& token = peek();
    if (token.kind == TokenKind::ident && is_unsupported_keyword(token.text)) {
      throw ParseError("unsupported syntax '" + token.text + "'", token.position);
    }
    if (token.kind == TokenKind::end) {
      throw ParseError("unexpected end of statement, expected " + std::string(expected),
                       token.position);
    }
    throw ParseError("unexpected '" + token.text + "', expected " + std::string(expected),
                     token.position);
  }

  bool accept_keyword(std::string_view word) {
    if (peek().kind == TokenKind::ident && peek().text == word) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_keyword(std::string_view word) {
    if (!accept_keyword(word)) fail_unexpected(word);
  }

  bool accept_symbol(std::string_view symbol) {
    if (peek().kind == TokenKind::symbol && peek().text == symbol) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_symbol(std::string_view symbol) {
    if (!accept_symbol(symbol)) fail_unexpected("'" + std::string(symbol) + "'");
  }

  std::string expect_identifier(std::string_view what) {
    const Token& token = peek();
    if (token.kind != TokenKind::ident || is_clause_keyword(token.text) ||
        is_unsupported_keyword(token.text)) {
      fail_unexpected(what);
    }
    ++pos_;
    return token.text;
  }

  struct ColumnRef {
    Attribute attribute;
    std::size_t position;
  };

  ColumnRef parse_column() {
    const std::size_t position = peek().position;
    std::string first = expect_identifier("column name");
    if (accept_symbol(".")) {
      std::string second = expect_identifier("column name");
      return {{std::move(first), std::move(second)}, position};
    }
    return {{fact_table_, std::move(first)}, position};
  }

  void mention(const Attribute& attribute) {
    if (std::find(query_.mention_order.begin(), query_.mention_order.end(), attribute) ==
        query_.mention_order.end()) {
      query_.mention_order.push_back(attribute);
    }
    referenced_.emplace_back(attribute, last_position_);
  }

  void parse_select_list() {
    do {
      const Token& token = peek();
      if (token.kind == TokenKind::symbol && token.text == "*") {
        throw ParseError("unsupported syntax '*'", token.position);
      }
      if (token.kind == TokenKind::ident) {
        auto op = aggregate_from(token.text);
        if (op && tokens_[pos_ + 1].kind == TokenKind::symbol && tokens_[pos_ + 1].text == "(") {
          pos_ += 2;
          if (peek().kind == TokenKind::symbol && peek().text == "*") {
            throw ParseError("unsupported syntax '*'", peek().position);
          }
          ColumnRef column = parse_column();
          expect_symbol(")");
          if (column.attribute.table != fact_table_) {
            throw ParseError("aggregated measure " + column.attribute.str() +
                                 " is not a column of the fact table " + fact_table_,
                             column.position);
          }
          query_.aggregations.insert({*op, column.attribute});
          referenced_.emplace_back(column.attribute, column.position);
          continue;
        }
      }
      ColumnRef column = parse_column();
      projected_.push_back(column);
    } while (accept_symbol(","));
  }

  void parse_from_list() {
    do {
      const Token& token = peek();
      if (token.kind == TokenKind::symbol && token.text == "(") {
        throw ParseError("unsupported syntax: subquery", token.position);
      }
      query_.tables.insert(expect_identifier("table name"));
      if (peek().kind == TokenKind::ident && !is_clause_keyword(peek().text) &&
          !is_unsupported_keyword(peek().text)) {
        throw ParseError("unsupported syntax: table alias", peek().position);
      }
    } while (accept_symbol(","));
  }

  std::optional<CompareOp> parse_compare_op() {
    const Token& token = peek();
    if (token.kind != TokenKind::symbol) return std::nullopt;
    static const std::map<std::string, CompareOp, std::less<>> ops = {
        {"=", CompareOp::eq}, {"<", CompareOp::lt}, {">", CompareOp::gt},
        {"<=", CompareOp::le}, {">=", CompareOp::ge}};
    auto it = ops.find(token.text);
    if (it == ops.end()) {
      if (token.text == "<>" || token.text == "!=") {
        throw ParseError("unsupported comparison '" + token.text + "'", token.position);
      }
      return std::nullopt;
    }
    ++pos_;
    return it->second;
  }

  std::optional<Literal> accept_literal() {
    const Token& token = peek();
    if (token.kind == TokenKind::number) {
      ++pos_;
      return parse_number(token);
    }
    if (token.kind == TokenKind::string) {
      ++pos_;
      return Literal(token.text);
    }
    return std::nullopt;
  }

  Literal expect_literal() {
    if (auto literal = accept_literal()) return *literal;
    if (peek().kind == TokenKind::symbol && peek().text == "(") {
      throw ParseError("unsupported syntax: subquery", peek().position);
    }
    fail_unexpected("literal");
  }

  static CompareOp mirror(CompareOp op) {
    switch (op) {
      case CompareOp::lt: return CompareOp::gt;
      case CompareOp::gt: return CompareOp::lt;
      case CompareOp::le: return CompareOp::ge;
      case CompareOp::ge: return CompareOp::le;
      default: return op;
    }
  }

  void add_predicate(SelectionPredicate predicate, std::size_t position) {
    last_position_ = position;
    mention(predicate.attribute);
    query_.predicates.insert(std::move(predicate));
  }

  void parse_term() {
    const std::size_t position = peek().position;
    if (peek().kind == TokenKind::symbol && peek().text == "(") {
      throw ParseError("unsupported syntax: parenthesized condition or subquery", position);
    }
    if (auto literal = accept_literal()) {
      auto op = parse_compare_op();
      if (!op) fail_unexpected("comparison operator");
      ColumnRef column = parse_column();
      add_predicate({column.attribute, mirror(*op), *literal, std::nullopt}, position);
      return;
    }
    ColumnRef left = parse_column();
    if (accept_keyword("between")) {
      Literal low = expect_literal();
      expect_keyword("and");
      Literal high = expect_literal();
      add_predicate({left.attribute, CompareOp::between, low, high}, position);
      return;
    }
    auto op = parse_compare_op();
    if (!op) fail_unexpected("comparison operator");
    if (auto literal = accept_literal()) {
      add_predicate({left.attribute, *op, *literal, std::nullopt}, position);
      return;
    }
    if (peek().kind == TokenKind::symbol && peek().text == "(") {
      throw ParseError("unsupported syntax: subquery", peek().position);
    }
    ColumnRef right = parse_column();
    if (*op != CompareOp::eq) {
      throw ParseError("unsupported syntax: non-equi join", position);
    }
    if (left.attribute.table == right.attribute.table) {
      throw ParseError("unsupported syntax: join between columns of one table", position);
    }
    JoinCondition join{left.attribute, right.attribute};
    if (join.right < join.left) std::swap(join.left, join.right);
    last_position_ = left.position;
    mention(left.attribute);
    last_position_ = right.position;
    mention(right.attribute);
    query_.join_attributes.insert(join.left);
    query_.join_attributes.insert(join.right);
    query_.joins.insert(std::move(join));
  }

  void parse_where() {
    do {
      parse_term();
    } while (accept_keyword("and"));
  }

  void parse_group_by() {
    do {
      ColumnRef column = parse_column();
      last_position_ = column.position;
      mention(column.attribute);
      query_.grouping.insert(column.attribute);
    } while (accept_symbol(","));
  }

  void validate() {
    for (const auto& [attribute, position] : referenced_) {
      if (!query_.tables.contains(attribute.table)) {
        throw ParseError("column " + attribute.str() + " references a table missing from FROM",
                         position);
      }
    }
    for (const ColumnRef& column : projected_) {
      if (!query_.tables.contains(column.attribute.table)) {
        throw ParseError("column " + column.attribute.str() +
                             " references a table missing from FROM",
                         column.position);
      }
      if (!query_.grouping.contains(column.attribute)) {
        throw ParseError("selected column " + column.attribute.str() +
                             " must appear in GROUP BY",
                         column.position);
      }
    }
    if (!query_.aggregations.empty() && !query_.tables.contains(fact_table_)) {
      throw ParseError("aggregation requires the fact table " + fact_table_ + " in FROM", 0);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::string fact_table_;
  ParsedQuery query_;
  std::vector<ColumnRef> projected_;
  std::vector<std::pair<Attribute, std::size_t>> referenced_;
  std::size_t last_position_ = 0;
};

std::string render_number(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  std::string text(buffer, ptr);
  if (text.find_first_of(".eEn") == std::string::npos) text += ".0";
  return text;
}

}  // namespace

Attribute Attribute::parse(std::string_view qualified) {
  const auto dot = qualified.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == qualified.size() ||
      qualified.find('.', dot + 1) != std::string_view::npos) {
    throw InputError("expected a qualified name 'table.column', got '" +
                     std::string(qualified) + "'");
  }
  return {lower(qualified.substr(0, dot)), lower(qualified.substr(dot + 1))};
}

std::string render_literal(const Literal& value) {
  if (const auto* integer = std::get_if<std::int64_t>(&value)) return std::to_string(*integer);
  if (const auto* real = std::get_if<double>(&value)) return render_number(*real);
  std::string out = "'";
  for (char c : std::get<std::string>(value)) {
    if (c == '\'') out += "''";
    else out += c;
  }
  out += "'";
  return out;
}

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::eq: return "=";
    case CompareOp::lt: return "<";
    case CompareOp::gt: return ">";
    case CompareOp::le: return "<=";
    case CompareOp::ge: return ">=";
    case CompareOp::between: return "between";
  }
  return "?";
}

std::string_view to_string(AggregateOp op) {
  switch (op) {
    case AggregateOp::sum: return "sum";
    case AggregateOp::count: return "count";
    case AggregateOp::min: return "min";
    case AggregateOp::max: return "max";
    case AggregateOp::avg: return "avg";
  }
  return "?";
}

std::string render_predicate(const SelectionPredicate& predicate) {
  std::string out = predicate.attribute.str();
  if (predicate.op == CompareOp::between) {
    out += " between " + render_literal(predicate.value) + " and " +
           render_literal(predicate.upper.value_or(predicate.value));
  } else {
    out += " ";
    out += to_string(predicate.op);
    out += " " + render_literal(predicate.value);
  }
  return out;
}

std::string render_aggregation(const Aggregation& aggregation) {
  return std::string(to_string(aggregation.op)) + "(" + aggregation.measure.str() + ")";
}

bool ParsedQuery::same_shape(const ParsedQuery& other) const {
  return tables == other.tables && joins == other.joins &&
         join_attributes == other.join_attributes && predicates == other.predicates &&
         grouping == other.grouping && aggregations == other.aggregations;
}

ParsedQuery parse_query(std::string_view sql, std::string_view fact_table, std::size_t id) {
  return Parser(sql, fact_table, id).run();
}

std::vector<std::string> split_statements(std::string_view text) {
  std::vector<std::string> statements;
  std::string current;
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (!in_string && c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') ++i;
      current.push_back('\n');
      continue;
    }
    if (c == '\'') in_string = !in_string;
    if (c == ';' && !in_string) {
      statements.push_back(current);
      current.clear();
      continue;
    }
    current.push_back(c);
  }
  statements.push_back(current);
  std::erase_if(statements, [](const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
  });
  return statements;
}

std::vector<ParsedQuery> parse_workload(std::string_view text, std::string_view fact_table) {
  std::vector<ParsedQuery> workload;
  for (const std::string& statement : split_statements(text)) {
    const std::size_t id = workload.size();
    try {
      workload.push_back(parse_query(statement, fact_table, id));
    } catch (const ParseError& error) {
      throw ParseError("statement " + std::to_string(id) + ": " + error.what(),
                       error.position());
    }
  }
  return workload;
}

std::string render_query(const ParsedQuery& query) {
  std::ostringstream out;
  out << "select ";
  bool first = true;
  for (const Attribute& attribute : query.grouping) {
    out << (first ? "" : ", ") << attribute.str();
    first = false;
  }
  for (const Aggregation& aggregation : query.aggregations) {
    out << (first ? "" : ", ") << render_aggregation(aggregation);
    first = false;
  }
  out << " from ";
  first = true;
  for (const std::string& table : query.tables) {
    out << (first ? "" : ", ") << table;
    first = false;
  }
  if (!query.joins.empty() || !query.predicates.empty()) {
    out << " where ";
    first = true;
    for (const JoinCondition& join : query.joins) {
      out << (first ? "" : " and ") << join.left.str() << " = " << join.right.str();
      first = false;
    }
    for (const SelectionPredicate& predicate : query.predicates) {
      out << (first ? "" : " and ") << render_predicate(predicate);
      first = false;
    }
  }
  if (!query.grouping.empty()) {
    out << " group by ";
    first = true;
    for (const Attribute& attribute : query.grouping) {
      out << (first ? "" : ", ") << attribute.str();
      first = false;
    }
  }
  return out.str();
}

std::set<Attribute> extract_attributes(const ParsedQuery& query) {
  std::set<Attribute> attributes = query.join_attributes;
  for (const SelectionPredicate& predicate : query.predicates) {
    attributes.insert(predicate.attribute);
  }
  attributes.insert(query.grouping.begin(), query.grouping.end());
  return attributes;
}

// ---------------------------------------------------------------------------
// ClusteringContext

void ClusteringContext::allocate(std::size_t rows, std::size_t columns) {
  words_per_row_ = (columns + 63) / 64;
  bits_.assign(rows * words_per_row_, 0);
}

void ClusteringContext::set(std::size_t row, std::size_t column) {
  bits_[row * words_per_row_ + column / 64] |= std::uint64_t{1} << (column % 64);
}

bool ClusteringContext::cell(std::size_t row, std::size_t column) const {
  if (row >= rows() || column >= columns()) throw std::out_of_range("context cell out of range");
  return (bits_[row * words_per_row_ + column / 64] >> (column % 64)) & 1U;
}

std::span<const std::uint64_t> ClusteringContext::row_words(std::size_t row) const {
  if (row >= rows()) throw std::out_of_range("context row out of range");
  return {bits_.data() + row * words_per_row_, words_per_row_};
}

std::size_t ClusteringContext::row_count_ones(std::size_t row) const {
  std::size_t count = 0;
  for (std::uint64_t word : row_words(row)) count += static_cast<std::size_t>(std::popcount(word));
  return count;
}

bool ClusteringContext::join_cell(std::size_t row, std::size_t join_column) const {
  return cell(row, join_columns_.at(join_column));
}

ClusteringContext ClusteringContext::from_rows(const std::vector<std::vector<int>>& rows) {
  ClusteringContext ctx;
  const std::size_t columns = rows.empty() ? 0 : rows.front().size();
  for (std::size_t j = 0; j < columns; ++j) {
    ctx.attributes_.push_back({"ctx", "a" + std::to_string(j + 1)});
  }
  ctx.allocate(rows.size(), columns);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != columns) throw std::invalid_argument("ragged context rows");
    ctx.query_ids_.push_back(i);
    for (std::size_t j = 0; j < columns; ++j) {
      if (rows[i][j] != 0) ctx.set(i, j);
    }
  }
  return ctx;
}

ClusteringContext build_context(std::span<const ParsedQuery> workload) {
  if (workload.empty()) throw ValidationError("cannot build a clustering context from an empty workload");
  ClusteringContext ctx;
  std::map<Attribute, std::size_t> column_of;
  std::set<Attribute> join_attributes;
  for (const ParsedQuery& query : workload) {
    const std::set<Attribute> attributes = extract_attributes(query);
    if (attributes.empty()) {
      throw ValidationError("query " + std::to_string(query.id) +
                            " has no representative attribute (no WHERE or GROUP BY column)");
    }
    for (const Attribute& attribute : query.mention_order) {
      if (attributes.contains(attribute) && !column_of.contains(attribute)) {
        column_of.emplace(attribute, ctx.attributes_.size());
        ctx.attributes_.push_back(attribute);
      }
    }
    // Queries built by hand may lack a mention order.
    for (const Attribute& attribute : attributes) {
      if (!column_of.contains(attribute)) {
        column_of.emplace(attribute, ctx.attributes_.size());
        ctx.attributes_.push_back(attribute);
      }
    }
    join_attributes.insert(query.join_attributes.begin(), query.join_attributes.end());
    ctx.query_ids_.push_back(query.id);
  }
  ctx.allocate(workload.size(), ctx.attributes_.size());
  for (std::size_t row = 0; row < workload.size(); ++row) {
    for (const Attribute& attribute : extract_attributes(workload[row])) {
      ctx.set(row, column_of.at(attribute));
    }
  }
  for (std::size_t j = 0; j < ctx.attributes_.size(); ++j) {
    if (join_attributes.contains(ctx.attributes_[j])) ctx.join_columns_.push_back(j);
  }
  return ctx;
}

}  // namespace viewsel
