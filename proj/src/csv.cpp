#include "exmine/csv.hpp"

#include "exmine/error.hpp"

namespace exmine::csv {

std::optional<Record> Reader::next() {
    while (true) {
        if (first_) {
            first_ = false;
            if (in_.peek() == 0xEF) {
                char bom[3];
                in_.read(bom, 3);
                if (!(static_cast<unsigned char>(bom[1]) == 0xBB &&
                      static_cast<unsigned char>(bom[2]) == 0xBF)) {
                    throw InputError("malformed byte order mark", 1);
                }
            }
        }
        if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;

        Record rec;
        rec.line = line_;
        std::string field;
        bool quoted = false;
        bool after_quote = false;
        bool any = false;
        int c;
        while ((c = in_.get()) != std::char_traits<char>::eof()) {
            const char ch = static_cast<char>(c);
            if (quoted) {
                if (ch == '"') {
                    if (in_.peek() == '"') {
                        in_.get();
                        field.push_back('"');
                    } else {
                        quoted = false;
                        after_quote = true;
                    }
                } else {
                    if (ch == '\n') ++line_;
                    field.push_back(ch);
                }
                continue;
            }
            if (ch == ',') {
                rec.fields.push_back(std::move(field));
                field.clear();
                after_quote = false;
                any = true;
            } else if (ch == '\n' || ch == '\r') {
                if (ch == '\r' && in_.peek() == '\n') in_.get();
                ++line_;
                break;
            } else if (ch == '"' && field.empty() && !after_quote) {
                quoted = true;
                any = true;
            } else if (after_quote) {
                throw InputError("unexpected character after closing quote", rec.line);
            } else {
                field.push_back(ch);
                any = true;
            }
        }
        if (quoted) throw InputError("unterminated quoted field", rec.line);
        if (!any && field.empty()) continue;  // blank line
        rec.fields.push_back(std::move(field));
        return rec;
    }
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(fields[i]);
    }
    return out;
}

}  // namespace exmine::csv
