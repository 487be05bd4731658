"""WSGI entry point: gunicorn wsgi:application"""
import os

os.environ.setdefault('FLASK_ENV', 'production')

from app import app as application  # noqa: E402

if __name__ == "__main__":
    application.run()
