from django.apps import AppConfig


class BiasinjectConfig(AppConfig):
    name = 'biasinject'
    verbose_name = 'Label bias injection'
