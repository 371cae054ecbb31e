#include "simfdr/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "simfdr/error.hpp"

namespace simfdr::csv {

std::string format_double(double x) {
    if (std::isnan(x))
        return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string format_field(const std::string& field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes)
        return field;
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char ch : field) {
        if (ch == '"')
            out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0)
            out.put(',');
        out << format_field(fields[i]);
    }
    out << "\r\n";
}

Table read(std::istream& in, const std::string& source_name) {
    Table table;
    std::vector<std::string> record;
    std::string field;
    enum class State { field_start, unquoted, quoted, quote_in_quoted };
    State state = State::field_start;
    std::size_t line = 1;
    std::size_t record_line = 1;
    bool record_started = false;
    bool header_done = false;

    const auto fail = [&source_name](std::size_t at, const std::string& message) {
        throw DataError(source_name + ":" + std::to_string(at) + ": " + message);
    };

    const auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        state = State::field_start;
    };
    const auto end_record = [&] {
        end_field();
        if (!header_done) {
            table.header = std::move(record);
            header_done = true;
        } else {
            if (record.size() != table.header.size())
                fail(record_line, "expected " + std::to_string(table.header.size()) +
                                      " fields, got " + std::to_string(record.size()));
            table.rows.push_back(std::move(record));
            table.line_numbers.push_back(record_line);
        }
        record.clear();
        record_started = false;
    };
    // A newline in the ground state: either a record terminator or, when
    // nothing has accumulated, a blank line (tolerated and skipped).
    const auto end_line = [&] {
        if (state == State::field_start && record.empty() && field.empty())
            record_started = false;
        else
            end_record();
        ++line;
    };
    const auto consume_crlf = [&] {
        if (in.peek() != '\n')
            fail(line, "bare carriage return");
        in.get();
        end_line();
    };

    char ch;
    while (in.get(ch)) {
        if (!record_started) {
            record_line = line;
            record_started = true;
        }
        switch (state) {
            case State::field_start:
                if (ch == '"')
                    state = State::quoted;
                else if (ch == ',')
                    end_field();
                else if (ch == '\n')
                    end_line();
                else if (ch == '\r')
                    consume_crlf();
                else {
                    field.push_back(ch);
                    state = State::unquoted;
                }
                break;
            case State::unquoted:
                if (ch == ',')
                    end_field();
                else if (ch == '\n')
                    end_record(), ++line;
                else if (ch == '\r')
                    consume_crlf();
                else if (ch == '"')
                    fail(line, "quote inside unquoted field");
                else
                    field.push_back(ch);
                break;
            case State::quoted:
                if (ch == '"') {
                    state = State::quote_in_quoted;
                } else {
                    if (ch == '\n')
                        ++line;
                    field.push_back(ch);
                }
                break;
            case State::quote_in_quoted:
                if (ch == '"') {
                    field.push_back('"');
                    state = State::quoted;
                } else if (ch == ',') {
                    end_field();
                } else if (ch == '\n') {
                    end_record();
                    ++line;
                } else if (ch == '\r') {
                    consume_crlf();
                } else {
                    fail(line, "unexpected character after closing quote");
                }
                break;
        }
    }

    if (state == State::quoted)
        fail(record_line, "unterminated quoted field");
    if (record_started)
        end_record();
    if (!header_done)
        fail(1, "empty input");
    return table;
}

double parse_double_field(const std::string& field, const std::string& what,
                          std::size_t line, const std::string& source_name) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw DataError(source_name + ":" + std::to_string(line) + ": invalid " +
                        what + ": '" + field + "'");
    return value;
}

} // namespace simfdr::csv
