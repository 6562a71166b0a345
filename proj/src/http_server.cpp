#include <httplib.h>

#include <functional>

#include "mlogs/error.hpp"
#include "mlogs/json_codec.hpp"
#include "mlogs/service.hpp"

namespace mlogs::service {

namespace {

// Multipart framing and headers ride on top of the raw upload cap.
constexpr std::size_t kFramingAllowance = 1024u * 1024u;

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownProject:
        case ErrorCode::UnknownWell:
        case ErrorCode::UnknownSelection:
        case ErrorCode::UnknownModel:
            return 404;
        case ErrorCode::NameCollision:
        case ErrorCode::NothingToUndo:
            return 409;
        case ErrorCode::PayloadTooLarge:
            return 413;
        case ErrorCode::IoError:
            return 500;
        case ErrorCode::InvalidArgument:
            return 400;
        default:
            return 422;
    }
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        return json::parse(req.body);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("request body is not valid JSON: ") + e.what());
    }
}

std::vector<std::string> string_list(const json& body, const char* key) {
    if (!body.contains(key)) return {};
    try {
        return body.at(key).get<std::vector<std::string>>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::InvalidArgument, std::string("field '") + key + "' must be a list of strings");
    }
}

using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

Handler guarded(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
        try {
            h(req, res);
        } catch (const Error& e) {
            send_json(res, codec::encode(e), http_status(e.code()));
        } catch (const json::exception& e) {
            send_json(res, codec::encode(Error(ErrorCode::InvalidArgument, e.what())), 400);
        } catch (const std::exception& e) {
            send_json(res, codec::encode(Error(ErrorCode::IoError, e.what())), 500);
        }
    };
}

}  // namespace

struct HttpServer::Impl {
    Service& service;
    ServiceConfig config;
    httplib::Server server;
    bool bound = false;

    Impl(Service& s, ServiceConfig c) : service(s), config(std::move(c)) { routes(); }

    void routes() {
        server.set_payload_max_length(service.upload_cap() + kFramingAllowance);

        server.Get("/healthz", guarded([](const httplib::Request&, httplib::Response& res) {
                       send_json(res, {{"status", "ok"}});
                   }));

        server.Post("/projects", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const json body = parse_body(req);
                        const std::string name = body.value("name", std::string{});
                        send_json(res, {{"id", service.create_project(name)}, {"name", name}}, 201);
                    }));
        server.Get("/projects", guarded([this](const httplib::Request&, httplib::Response& res) {
                       send_json(res, service.list_projects());
                   }));

        server.Post(R"(/projects/([^/]+)/wells)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        std::string content = req.body;
                        std::string filename;
                        if (req.is_multipart_form_data()) {
                            if (req.files.empty()) {
                                throw Error(ErrorCode::InvalidArgument, "multipart upload carries no file");
                            }
                            const auto& file = req.has_file("file") ? req.get_file_value("file") : req.files.begin()->second;
                            content = file.content;
                            filename = file.filename;
                        }
                        send_json(res, service.upload_las(req.matches[1], content, filename), 201);
                    }));
        server.Get(R"(/projects/([^/]+)/wells)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                       send_json(res, service.list_wells(req.matches[1]));
                   }));

        server.Post(R"(/projects/([^/]+)/wells/([^/]+)/rename)",
                    guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const json body = parse_body(req);
                        send_json(res, service.rename_curve(req.matches[1], req.matches[2],
                                                            body.at("old").get<std::string>(),
                                                            body.at("new").get<std::string>()));
                    }));
        server.Post(R"(/projects/([^/]+)/wells/([^/]+)/limits)",
                    guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const json body = parse_body(req);
                        send_json(res, service.apply_limits(req.matches[1], req.matches[2],
                                                            body.at("curve").get<std::string>(),
                                                            body.at("lo").get<double>(), body.at("hi").get<double>()));
                    }));
        server.Post(R"(/projects/([^/]+)/wells/([^/]+)/select-curves)",
                    guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const json body = parse_body(req);
                        send_json(res, service.select_curves(req.matches[1], req.matches[2], string_list(body, "curves")));
                    }));

        server.Get(R"(/projects/([^/]+)/chart)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                       ChartParams params;
                       for (const auto& [k, v] : req.params) params[k] = v;
                       send_json(res, service.chart(req.matches[1], params));
                   }));

        server.Post(R"(/projects/([^/]+)/selections)",
                    guarded([this](const httplib::Request& req, httplib::Response& res) {
                        send_json(res, service.save_selection(req.matches[1], parse_body(req)), 201);
                    }));
        server.Get(R"(/projects/([^/]+)/selections)",
                   guarded([this](const httplib::Request& req, httplib::Response& res) {
                       send_json(res, service.list_selections(req.matches[1]));
                   }));
        server.Post(R"(/projects/([^/]+)/selections/([^/]+)/apply)",
                    guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const json body = parse_body(req);
                        const std::string mode = body.value("mode", std::string("mask"));
                        outliers::RemovalMode m;
                        if (mode == "mask") m = outliers::RemovalMode::Mask;
                        else if (mode == "drop") m = outliers::RemovalMode::Drop;
                        else throw Error(ErrorCode::InvalidArgument, "mode must be mask or drop");
                        send_json(res, service.apply_selection(req.matches[1], req.matches[2], m, string_list(body, "curves")));
                    }));
        server.Post(R"(/projects/([^/]+)/undo/([^/]+))",
                    guarded([this](const httplib::Request& req, httplib::Response& res) {
                        send_json(res, service.undo(req.matches[1], req.matches[2]));
                    }));

        server.Post(R"(/projects/([^/]+)/models)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        send_json(res, service.train_model(req.matches[1], parse_body(req)), 201);
                    }));
        server.Post(R"(/projects/([^/]+)/models/([^/]+)/predict)",
                    guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const json body = parse_body(req);
                        std::string well = body.value("well", std::string{});
                        if (well.empty() && req.has_param("well")) well = req.get_param_value("well");
                        send_json(res, service.run_predict(req.matches[1], req.matches[2], well));
                    }));

        server.Get(R"(/projects/([^/]+)/export)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                       const std::string format = req.has_param("format") ? req.get_param_value("format") : "csv";
                       const std::string well = req.has_param("well") ? req.get_param_value("well") : "ALL";
                       std::vector<std::string> curves;
                       if (req.has_param("curves")) {
                           std::string cur;
                           for (char c : req.get_param_value("curves") + ",") {
                               if (c == ',') {
                                   if (!cur.empty()) curves.push_back(cur);
                                   cur.clear();
                               } else {
                                   cur.push_back(c);
                               }
                           }
                       }
                       const ExportFile f = service.export_data(req.matches[1], well, format, curves);
                       res.set_header("Content-Disposition", "attachment; filename=\"" + f.filename + "\"");
                       res.set_content(f.content, f.content_type);
                   }));

        if (!config.static_dir.empty()) {
            if (!server.set_mount_point("/", config.static_dir.string())) {
                throw Error(ErrorCode::IoError, "static directory '" + config.static_dir.string() + "' does not exist");
            }
        }
    }
};

HttpServer::HttpServer(Service& service, ServiceConfig config)
    : impl_(std::make_unique<Impl>(service, std::move(config))) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
    int port = impl_->config.port;
    if (port == 0) {
        port = impl_->server.bind_to_any_port(impl_->config.host);
        if (port < 0) throw Error(ErrorCode::IoError, "cannot bind to " + impl_->config.host);
    } else if (!impl_->server.bind_to_port(impl_->config.host, port)) {
        throw Error(ErrorCode::IoError, "cannot bind to " + impl_->config.host + ":" + std::to_string(port));
    }
    impl_->bound = true;
    return port;
}

void HttpServer::listen() {
    if (!impl_->bound) throw Error(ErrorCode::InvalidArgument, "listen() before bind()");
    impl_->server.listen_after_bind();
}

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace mlogs::service
