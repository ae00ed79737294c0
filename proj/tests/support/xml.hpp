#pragma once

// Well-formedness check and element census for SVG output, via expat.

#include <expat.h>

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace isc::testing {

struct XmlCensus {
    bool well_formed = false;
    std::string error;
    std::string root;
    /// Elements per class token.
    std::map<std::string, int> classes;
    /// Elements per tag name among those carrying the `datum` class.
    std::map<std::string, int> datum_tags;
    std::vector<std::string> texts;

    [[nodiscard]] int count(const std::string& cls) const {
        auto it = classes.find(cls);
        return it == classes.end() ? 0 : it->second;
    }
};

inline XmlCensus census(const std::string& xml) {
    XmlCensus out;
    struct State {
        XmlCensus* out;
        std::string text;
        int depth = 0;
    } state{&out};

    XML_Parser p = XML_ParserCreate("UTF-8");
    XML_SetUserData(p, &state);
    XML_SetElementHandler(
        p,
        [](void* data, const XML_Char* name, const XML_Char** attrs) {
            auto* s = static_cast<State*>(data);
            if (s->depth++ == 0) s->out->root = name;
            s->text.clear();
            for (int i = 0; attrs[i]; i += 2) {
                if (std::string(attrs[i]) != "class") continue;
                std::istringstream tokens(attrs[i + 1]);
                std::string tok;
                bool datum = false;
                while (tokens >> tok) {
                    s->out->classes[tok]++;
                    datum = datum || tok == "datum";
                }
                if (datum) s->out->datum_tags[name]++;
            }
        },
        [](void* data, const XML_Char*) {
            auto* s = static_cast<State*>(data);
            --s->depth;
            if (!s->text.empty()) s->out->texts.push_back(s->text);
            s->text.clear();
        });
    XML_SetCharacterDataHandler(p, [](void* data, const XML_Char* chars, int len) {
        static_cast<State*>(data)->text.append(chars, static_cast<std::size_t>(len));
    });
    if (XML_Parse(p, xml.data(), static_cast<int>(xml.size()), 1) == XML_STATUS_OK) {
        out.well_formed = true;
    } else {
        out.error = std::string(XML_ErrorString(XML_GetErrorCode(p))) + " at line " +
                    std::to_string(XML_GetCurrentLineNumber(p));
    }
    XML_ParserFree(p);
    return out;
}

}  // namespace isc::testing
