#include "isc/api.hpp"

#include <csignal>
#include <iostream>
#include <thread>

#include <httplib.h>

#include "isc/draft_engine.hpp"
#include "isc/ingest.hpp"
#include "isc/model.hpp"
#include "isc/render.hpp"

namespace isc {

using nlohmann::json;
using httplib::Request;
using httplib::Response;

namespace {

// Room for multipart framing around a maximal CSV upload.
constexpr std::size_t kMaxRequestBytes = kMaxCsvBytes + 1024 * 1024;

constexpr const char* kJson = "application/json";

void send_json(Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), kJson);
}

void send_error(Response& res, const Error& e) {
    send_json(res, e.to_json(), http_status(e.code()));
}

json body_json(const Request& req) { return parse_json(req.body); }

std::string slug(std::string_view name) {
    std::string out;
    for (char c : name) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            out += static_cast<char>(std::tolower(u));
        } else if (!out.empty() && out.back() != '-') {
            out += '-';
        }
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out.empty() ? "indicator" : out;
}

std::optional<std::string> query(const Request& req, const char* key) {
    if (!req.has_param(key)) return std::nullopt;
    return req.get_param_value(key);
}

std::vector<TableEdit> read_edits(const json& body) {
    const json* list = &body;
    if (body.is_object() && body.contains("edits")) list = &body["edits"];
    std::vector<TableEdit> edits;
    if (list->is_array()) {
        for (std::size_t i = 0; i < list->size(); ++i) {
            edits.push_back(read_table_edit((*list)[i], "edits[" + std::to_string(i) + "]"));
        }
    } else {
        edits.push_back(read_table_edit(*list, "edit"));
    }
    return edits;
}

}  // namespace

RuleSet load_configured_rules(const ServerConfig& config) {
    return config.rules_file ? load_rules_file(*config.rules_file) : default_rules();
}

struct ApiServer::Impl {
    explicit Impl(FileStore& s) : store(s), engine(s) {}

    FileStore& store;
    DraftEngine engine;
    httplib::Server server;

    using Handler = std::function<void(const Request&, Response&)>;

    static Handler guarded(Handler fn) {
        return [fn = std::move(fn)](const Request& req, Response& res) {
            try {
                fn(req, res);
            } catch (const Error& e) {
                send_error(res, e);
            } catch (const std::exception& e) {
                send_error(res, Error(ErrorCode::Internal, e.what()));
            }
        };
    }

    void get(const std::string& pattern, Handler fn) { server.Get(pattern, guarded(std::move(fn))); }
    void post(const std::string& pattern, Handler fn) { server.Post(pattern, guarded(std::move(fn))); }
    void put(const std::string& pattern, Handler fn) { server.Put(pattern, guarded(std::move(fn))); }
    void del(const std::string& pattern, Handler fn) { server.Delete(pattern, guarded(std::move(fn))); }

    void routes();
    void card_routes();
    void draft_routes();
    void meta_routes();
};

void ApiServer::Impl::routes() {
    server.set_payload_max_length(kMaxRequestBytes);
    // The library default adds SO_REUSEPORT, which lets a second server share a
    // port that is already in use.
    server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
    });
    server.set_error_handler([](const Request&, Response& res) {
        if (!res.body.empty()) return;
        const ErrorCode code = res.status == 404   ? ErrorCode::NotFound
                               : res.status == 413 ? ErrorCode::TooLarge
                               : res.status < 500  ? ErrorCode::Validation
                                                   : ErrorCode::Internal;
        const int status = res.status;
        send_json(res, Error(code, httplib::status_message(status)).to_json(), status);
    });

    get("/api/health", [](const Request&, Response& res) { send_json(res, {{"status", "ok"}}); });
    card_routes();
    draft_routes();
    meta_routes();
}

void ApiServer::Impl::card_routes() {
    static const std::string card = R"(/api/cards/([^/]+))";

    get("/api/cards", [this](const Request&, Response& res) {
        json out = json::array();
        for (const auto& s : store.list_cards()) out.push_back(to_json(s));
        send_json(res, out);
    });

    post("/api/cards", [this](const Request& req, Response& res) {
        Card c = parse_card(req.body, store.rules());
        send_json(res, to_json(store.save_card(std::move(c))), 201);
    });

    get(card, [this](const Request& req, Response& res) {
        send_json(res, to_json(store.get_card(req.matches[1])));
    });

    put(card, [this](const Request& req, Response& res) {
        const std::string id = req.matches[1];
        Card c = read_card(body_json(req));
        if (c.id != id) {
            throw Error(ErrorCode::Validation, "body id does not match the URL",
                        {{"id", "must equal " + id}});
        }
        send_json(res, to_json(store.update_card(id, c, c.version)));
    });

    del(card, [this](const Request& req, Response& res) {
        const std::string id = req.matches[1];
        store.delete_card(id);
        send_json(res, {{"deleted", id}});
    });

    post(card + "/duplicate", [this](const Request& req, Response& res) {
        send_json(res, to_json(store.duplicate_card(req.matches[1])), 201);
    });

    get(card + "/card-document", [this](const Request& req, Response& res) {
        send_json(res, to_json(render_card(store.get_card(req.matches[1]))));
    });

    get(card + "/chart-spec", [this](const Request& req, Response& res) {
        send_json(res, to_json(build_chart_spec(store.get_card(req.matches[1]))));
    });

    get(card + "/export", [this](const Request& req, Response& res) {
        const Card c = store.get_card(req.matches[1]);
        const std::string format = query(req, "format").value_or("json");
        if (format == "json") {
            res.set_content(export_card_json(c), kJson);
            res.set_header("Content-Disposition", "attachment; filename=\"" + slug(c.name) + ".json\"");
        } else if (format == "svg") {
            res.set_content(export_chart_svg(build_chart_spec(c)), "image/svg+xml");
            res.set_header("Content-Disposition", "attachment; filename=\"" + slug(c.name) + ".svg\"");
        } else {
            throw Error(ErrorCode::Validation, "unsupported export format '" + format + "'",
                        {{"format", "expected json or svg"}});
        }
    });
}

void ApiServer::Impl::draft_routes() {
    static const std::string draft = R"(/api/drafts/([^/]+))";

    post("/api/drafts", [this](const Request& req, Response& res) {
        const json body = body_json(req);
        const bool wrapped = body.is_object() && body.contains("goal_question");
        const GoalQuestion gq = wrapped ? read_goal_question(body["goal_question"], "goal_question")
                                        : read_goal_question(body, "");
        send_json(res, to_json(engine.start(gq)), 201);
    });

    get(draft, [this](const Request& req, Response& res) {
        send_json(res, to_json(engine.get(req.matches[1])));
    });

    del(draft, [this](const Request& req, Response& res) {
        const std::string id = req.matches[1];
        engine.discard(id);
        send_json(res, {{"deleted", id}});
    });

    post(draft + "/path", [this](const Request& req, Response& res) {
        const json body = body_json(req);
        const auto it = body.find("path");
        const auto path = it != body.end() && it->is_string() ? parse_draft_path(it->get<std::string>())
                                                              : std::nullopt;
        if (!path) {
            throw Error(ErrorCode::Validation, "path must be visualization or dataset",
                        {{"path", "expected visualization or dataset"}});
        }
        send_json(res, to_json(engine.choose_path(req.matches[1], *path)));
    });

    post(draft + "/steps", [this](const Request& req, Response& res) {
        send_json(res, to_json(engine.apply(req.matches[1], read_step(body_json(req)))));
    });

    get(draft + "/recommendations", [this](const Request& req, Response& res) {
        std::optional<TaskType> task;
        if (auto t = query(req, "task")) task = read_task_type(json(*t), "task");
        json out = json::array();
        for (const auto& r : engine.recommendations(req.matches[1], task)) out.push_back(to_json(r));
        send_json(res, out);
    });

    get(draft + "/axis-candidates", [this](const Request& req, Response& res) {
        std::optional<IdiomType> idiom;
        if (auto i = query(req, "idiom")) idiom = read_idiom_type(json(*i), "idiom");
        const auto c = engine.axis_candidates(req.matches[1], idiom);
        send_json(res, {{"x", c.x}, {"y", c.y}});
    });

    post(draft + "/table:upload", [this](const Request& req, Response& res) {
        std::string_view csv = req.body;
        std::string file_content;
        if (req.is_multipart_form_data()) {
            if (!req.has_file("file")) {
                throw Error(ErrorCode::Validation, "multipart upload needs a 'file' part",
                            {{"file", "missing"}});
            }
            file_content = req.get_file_value("file").content;
            csv = file_content;
        }
        send_json(res, to_json(engine.upload_csv(req.matches[1], csv)));
    });

    post(draft + "/table/edits", [this](const Request& req, Response& res) {
        const std::string id = req.matches[1];
        if (req.body.empty()) {
            send_json(res, to_json(engine.open_data_step(id)));
            return;
        }
        const auto edits = read_edits(body_json(req));
        send_json(res, to_json(engine.edit_table(id, edits)));
    });

    post(draft + "/finalize", [this](const Request& req, Response& res) {
        const json body = body_json(req);
        const auto it = body.find("name");
        if (it == body.end() || !it->is_string()) {
            throw Error(ErrorCode::Validation, "name is required", {{"name", "must not be empty"}});
        }
        send_json(res, to_json(engine.finalize(req.matches[1], it->get<std::string>())), 201);
    });
}

void ApiServer::Impl::meta_routes() {
    get("/api/meta/tasks", [](const Request&, Response& res) {
        json out = json::array();
        for (TaskType t : kAllTaskTypes) {
            out.push_back({{"id", std::string(to_id(t))},
                           {"label", std::string(display_name(t))},
                           {"description", std::string(describe(t))},
                           {"thumbnail", "task-" + std::string(to_id(t)) + ".svg"}});
        }
        send_json(res, out);
    });

    get("/api/meta/idioms", [this](const Request&, Response& res) {
        json out = json::array();
        for (const auto& rule : store.rules()) {
            json tasks = json::array();
            for (TaskType t : rule.tasks) tasks.push_back(std::string(to_id(t)));
            out.push_back({{"id", std::string(to_id(rule.idiom))},
                           {"label", std::string(display_name(rule.idiom))},
                           {"description", rule.description},
                           {"requires", rule.requirement.describe()},
                           {"tasks", tasks},
                           {"thumbnail", "idiom-" + std::string(to_id(rule.idiom)) + ".svg"}});
        }
        send_json(res, out);
    });

    get("/api/meta/rules", [this](const Request&, Response& res) { send_json(res, to_json(store.rules())); });
}

ApiServer::ApiServer(FileStore& store) : impl_(std::make_unique<Impl>(store)) { impl_->routes(); }

ApiServer::~ApiServer() = default;

int ApiServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ApiServer::listen_after_bind() { return impl_->server.listen_after_bind(); }
void ApiServer::stop() { impl_->server.stop(); }
void ApiServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

int serve(const ServerConfig& config) {
    RuleSet rules;
    try {
        rules = load_configured_rules(config);
    } catch (const Error& e) {
        std::cerr << "isc-server: invalid rules file "
                  << (config.rules_file ? config.rules_file->string() : std::string("<built-in>")) << ": "
                  << e.what() << "\n";
        for (const auto& d : e.details()) std::cerr << "  " << d.to_string() << "\n";
        return 1;
    }

    std::unique_ptr<FileStore> store;
    try {
        store = std::make_unique<FileStore>(config.data_dir, std::move(rules));
    } catch (const Error& e) {
        std::cerr << "isc-server: unusable data directory " << config.data_dir << ": " << e.what() << "\n";
        return 1;
    }

    // Block the shutdown signals in every thread; a dedicated thread waits for them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    ApiServer server(*store);
    const int port = server.bind(config.host, config.port);
    if (port < 0) {
        std::cerr << "isc-server: cannot listen on " << config.host << ":" << config.port << "\n";
        return 2;
    }

    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
    });

    std::cerr << "isc-server: listening on http://" << config.host << ":" << port << " (data "
              << config.data_dir.string() << ")\n";
    server.listen_after_bind();

    // Wake the waiter if the server stopped on its own.
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    std::cerr << "isc-server: stopped\n";
    return 0;
}

}  // namespace isc
