from .app import AppState, SessionStore, create_app, load_state

__all__ = ["AppState", "SessionStore", "create_app", "load_state"]
